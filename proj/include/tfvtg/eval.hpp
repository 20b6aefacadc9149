#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfvtg/fusion.hpp"
#include "tfvtg/signal.hpp"

namespace tfvtg {

struct Annotation {
  std::string video_id;
  std::string query;
  double gt_start_sec = 0.0;
  double gt_end_sec = 0.0;
  double video_duration_sec = 0.0;

  /// Throws InputError unless 0 <= start < end <= duration.
  void validate() const;
};

struct TimeInterval {
  double start = 0.0;
  double end = 0.0;
};

struct EvalReport {
  std::map<double, double> recall_at;  // threshold -> percentage
  double miou = 0.0;                   // percentage
  std::size_t count = 0;

  /// Aligned plain-text table, one row per threshold plus mIoU.
  std::string table() const;
};

inline const std::vector<double> kDefaultThresholds{0.3, 0.5, 0.7};

double iou(TimeInterval a, TimeInterval b);

/// R@m counts pairs with IoU strictly above m. Annotations without a
/// prediction count as IoU 0; predictions without an annotation are ignored.
EvalReport evaluate(std::span<const FinalPrediction> preds, std::span<const Annotation> gts,
                    std::span<const double> thresholds);

struct NoiseBand {
  double low = -0.05;
  double high = 0.05;
};

/// round(prefix_sec * fps) frames drawn uniformly from the band, followed by
/// the original track. Deterministic per seed.
SimilarityTrack prepend_noise(const SimilarityTrack& track, double prefix_sec, std::uint64_t seed,
                              NoiseBand band = {});

Annotation shift_annotation(const Annotation& ann, double prefix_sec);

/// prepend_noise and shift_annotation together.
std::pair<Annotation, SimilarityTrack> ood_shift(const Annotation& ann, const SimilarityTrack& track,
                                                 double prefix_sec, std::uint64_t seed,
                                                 NoiseBand band = {});

}  // namespace tfvtg

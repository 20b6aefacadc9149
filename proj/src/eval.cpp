#include "tfvtg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <fmt/format.h>

#include "tfvtg/error.hpp"

namespace tfvtg {

void Annotation::validate() const {
  if (!(std::isfinite(gt_start_sec) && std::isfinite(gt_end_sec) && std::isfinite(video_duration_sec)))
    throw InputError(fmt::format("annotation '{}': non-finite timestamps", video_id));
  if (!(gt_start_sec >= 0 && gt_end_sec > gt_start_sec && video_duration_sec >= gt_end_sec))
    throw InputError(fmt::format("annotation '{}' / '{}': need 0 <= start < end <= duration, got "
                                 "[{}, {}) in {}",
                                 video_id, query, gt_start_sec, gt_end_sec, video_duration_sec));
}

std::string EvalReport::table() const {
  std::string out = fmt::format("{:<10}{:>10}\n", "metric", "value");
  for (const auto& [m, r] : recall_at) out += fmt::format("{:<10}{:>10.2f}\n", fmt::format("R@{}", m), r);
  out += fmt::format("{:<10}{:>10.2f}\n", "mIoU", miou);
  out += fmt::format("{:<10}{:>10}\n", "count", count);
  return out;
}

double iou(TimeInterval a, TimeInterval b) {
  if (!(a.end > a.start) || !(b.end > b.start))
    throw InputError(fmt::format("iou: degenerate interval [{}, {}) or [{}, {})", a.start, a.end,
                                 b.start, b.end));
  const double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = (a.end - a.start) + (b.end - b.start) - inter;
  return inter / uni;
}

EvalReport evaluate(std::span<const FinalPrediction> preds, std::span<const Annotation> gts,
                    std::span<const double> thresholds) {
  if (thresholds.empty()) throw InputError("evaluate: no IoU thresholds");
  for (double m : thresholds)
    if (!(m > 0 && m < 1)) throw InputError(fmt::format("evaluate: threshold {} not in (0, 1)", m));

  using Key = std::pair<std::string, std::string>;
  std::map<Key, const FinalPrediction*> by_key;
  for (const auto& p : preds)
    if (!by_key.emplace(Key{p.video_id, p.query}, &p).second)
      throw InputError(fmt::format("evaluate: duplicate prediction for ('{}', '{}')", p.video_id, p.query));

  std::set<Key> seen;
  std::vector<double> ious;
  for (const auto& gt : gts) {
    gt.validate();
    if (!seen.insert({gt.video_id, gt.query}).second)
      throw InputError(fmt::format("evaluate: duplicate annotation for ('{}', '{}')", gt.video_id, gt.query));
    auto it = by_key.find({gt.video_id, gt.query});
    double value = 0.0;
    if (it != by_key.end() && it->second->end_sec > it->second->start_sec)
      value = iou({it->second->start_sec, it->second->end_sec}, {gt.gt_start_sec, gt.gt_end_sec});
    ious.push_back(value);
  }

  EvalReport report;
  report.count = ious.size();
  for (double m : thresholds) {
    const auto hits = std::count_if(ious.begin(), ious.end(), [m](double v) { return v > m; });
    report.recall_at[m] = report.count ? 100.0 * static_cast<double>(hits) / static_cast<double>(report.count) : 0.0;
  }
  double sum = 0.0;
  for (double v : ious) sum += v;
  report.miou = report.count ? 100.0 * sum / static_cast<double>(report.count) : 0.0;
  return report;
}

SimilarityTrack prepend_noise(const SimilarityTrack& track, double prefix_sec, std::uint64_t seed,
                              NoiseBand band) {
  if (!(std::isfinite(prefix_sec) && prefix_sec > 0)) throw InputError("ood shift: prefix_sec must be > 0");
  if (!(band.low <= band.high)) throw InputError("ood shift: noise band low exceeds high");

  const auto frames = static_cast<std::size_t>(std::llround(prefix_sec * track.fps()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(band.low, band.high);
  std::vector<double> values;
  values.reserve(frames + track.size());
  for (std::size_t n = 0; n < frames; ++n) values.push_back(noise(rng));
  values.insert(values.end(), track.values().begin(), track.values().end());
  return SimilarityTrack(track.video_id(), std::move(values), track.fps());
}

Annotation shift_annotation(const Annotation& ann, double prefix_sec) {
  if (!(std::isfinite(prefix_sec) && prefix_sec > 0)) throw InputError("ood shift: prefix_sec must be > 0");
  Annotation shifted = ann;
  shifted.gt_start_sec += prefix_sec;
  shifted.gt_end_sec += prefix_sec;
  shifted.video_duration_sec += prefix_sec;
  return shifted;
}

std::pair<Annotation, SimilarityTrack> ood_shift(const Annotation& ann, const SimilarityTrack& track,
                                                 double prefix_sec, std::uint64_t seed, NoiseBand band) {
  return {shift_annotation(ann, prefix_sec), prepend_noise(track, prefix_sec, seed, band)};
}

}  // namespace tfvtg

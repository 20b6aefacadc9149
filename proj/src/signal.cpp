#include "tfvtg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "tfvtg/error.hpp"

namespace tfvtg {

EmbeddingSet::EmbeddingSet(std::string video_id, std::vector<double> frame_embeddings,
                           std::size_t dim, std::vector<double> text_embedding, double fps)
    : video_id_(std::move(video_id)),
      frame_embeddings_(std::move(frame_embeddings)),
      dim_(dim),
      text_embedding_(std::move(text_embedding)),
      fps_(fps) {
  if (dim_ == 0 || frame_embeddings_.empty()) throw InputError("embedding set: N and D must be >= 1");
  if (frame_embeddings_.size() % dim_ != 0)
    throw InputError("embedding set: frame matrix size is not a multiple of D");
  if (text_embedding_.size() != dim_)
    throw InputError(fmt::format("embedding set: text embedding has {} entries, expected {}",
                                 text_embedding_.size(), dim_));
  if (!(std::isfinite(fps_) && fps_ > 0)) throw InputError("embedding set: fps must be > 0");
  for (std::size_t n = 0; n < frame_embeddings_.size(); ++n)
    if (!std::isfinite(frame_embeddings_[n]))
      throw InputError(fmt::format("embedding set: non-finite entry in frame row {}", n / dim_));
  for (double v : text_embedding_)
    if (!std::isfinite(v)) throw InputError("embedding set: non-finite entry in text embedding");
}

SimilarityTrack::SimilarityTrack(std::string video_id, std::vector<double> values, double fps)
    : video_id_(std::move(video_id)), values_(std::move(values)), fps_(fps) {
  if (values_.size() < 2)
    throw InputError(fmt::format("track '{}': need at least 2 frames, got {}", video_id_,
                                 values_.size()));
  if (!(std::isfinite(fps_) && fps_ > 0))
    throw InputError(fmt::format("track '{}': fps must be a positive number", video_id_));
  for (std::size_t n = 0; n < values_.size(); ++n) {
    double& v = values_[n];
    if (!std::isfinite(v))
      throw InputError(fmt::format("track '{}': non-finite value at frame {}", video_id_, n));
    if (std::abs(v) > 1.0 + kClampSlack)
      throw InputError(
          fmt::format("track '{}': value {} at frame {} is outside [-1, 1]", video_id_, v, n));
    v = std::clamp(v, -1.0, 1.0);
  }
}

void ScoringParams::validate() const {
  if (!(std::isfinite(delta) && delta >= 0)) throw InputError("delta must be a finite value >= 0");
  if (!(std::isfinite(gaussian_sigma) && gaussian_sigma >= 0))
    throw InputError("gaussian_sigma must be a finite value >= 0");
  if (topk < 1) throw InputError("topk must be >= 1");
  if (!(nms_iou >= 0 && nms_iou <= 1)) throw InputError("nms_iou must lie in [0, 1]");
  if (min_frames < 1) throw InputError("min_frames must be >= 1");
}

bool ranks_before(const ScoredProposal& a, const ScoredProposal& b) {
  if (a.final_score != b.final_score) return a.final_score > b.final_score;
  if (a.start != b.start) return a.start < b.start;
  if (a.length() != b.length()) return a.length() < b.length();
  return a.split < b.split;
}

SimilarityTrack cosine_similarity(const EmbeddingSet& e) {
  auto norm = [](std::span<const double> v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  };
  const double text_norm = norm(e.text());
  if (text_norm == 0.0) throw InputError("cosine similarity: text embedding is the zero vector");

  std::vector<double> values(e.rows());
  for (std::size_t n = 0; n < e.rows(); ++n) {
    auto row = e.row(n);
    const double row_norm = norm(row);
    if (row_norm == 0.0)
      throw InputError(fmt::format("cosine similarity: frame embedding {} is the zero vector", n));
    const double dot = std::inner_product(row.begin(), row.end(), e.text().begin(), 0.0);
    values[n] = std::clamp(dot / (text_norm * row_norm), -1.0, 1.0);
  }
  return SimilarityTrack(e.video_id(), std::move(values), e.fps());
}

std::vector<double> gaussian_smooth(std::span<const double> values, double sigma) {
  std::vector<double> out(values.begin(), values.end());
  if (sigma == 0.0 || values.empty()) return out;

  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  for (std::ptrdiff_t t = -radius; t <= radius; ++t)
    taps[t + radius] = std::exp(-0.5 * (t * t) / (sigma * sigma));

  const auto n = static_cast<std::ptrdiff_t>(values.size());
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, c - radius);
    const std::ptrdiff_t hi = std::min(n - 1, c + radius);
    double acc = 0.0;
    double weight = 0.0;
    for (std::ptrdiff_t s = lo; s <= hi; ++s) {
      const double w = taps[s - c + radius];
      acc += w * values[s];
      weight += w;
    }
    out[c] = acc / weight;
  }
  return out;
}

std::vector<double> differences(std::span<const double> smoothed) {
  if (smoothed.size() < 2) throw InputError("differences: need at least 2 values");
  std::vector<double> out(smoothed.size() - 1);
  for (std::size_t l = 1; l < smoothed.size(); ++l) out[l - 1] = smoothed[l] - smoothed[l - 1];
  return out;
}

double dynamic_score(std::span<const double> diffs, std::ptrdiff_t a, std::ptrdiff_t b,
                     double delta) {
  const auto last_frame = static_cast<std::ptrdiff_t>(diffs.size());
  if (a < 0 || b < a || b > last_frame)
    throw InputError(fmt::format("dynamic_score: segment [{}, {}] out of range 0..{}", a, b,
                                 last_frame));
  double sum = 0.0;
  for (std::ptrdiff_t l = a + 1; l <= b; ++l) {
    const double d = diffs[l - 1];
    if (!(d > delta)) return 0.0;
    sum += d;
  }
  return sum;
}

double static_score(std::span<const double> values, std::ptrdiff_t k, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  if (k < 0 || j <= k || j > n || j - k >= n)
    throw InputError(fmt::format("static_score: [{}, {}) is not a strict sub-interval of 0..{}",
                                 k, j, n));
  double inside = 0.0;
  double outside = 0.0;
  for (std::ptrdiff_t l = 0; l < n; ++l) (l >= k && l < j ? inside : outside) += values[l];
  return inside / static_cast<double>(j - k) - outside / static_cast<double>(n - (j - k));
}

}  // namespace tfvtg

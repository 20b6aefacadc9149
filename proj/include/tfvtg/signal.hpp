#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tfvtg {

/// Per-frame vision features and one text feature from the same encoder.
/// frame_embeddings is row-major, rows() x dim().
class EmbeddingSet {
 public:
  EmbeddingSet(std::string video_id, std::vector<double> frame_embeddings, std::size_t dim,
               std::vector<double> text_embedding, double fps);

  const std::string& video_id() const { return video_id_; }
  std::size_t rows() const { return frame_embeddings_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  double fps() const { return fps_; }
  std::span<const double> row(std::size_t n) const {
    return {frame_embeddings_.data() + n * dim_, dim_};
  }
  std::span<const double> text() const { return text_embedding_; }

 private:
  std::string video_id_;
  std::vector<double> frame_embeddings_;
  std::size_t dim_;
  std::vector<double> text_embedding_;
  double fps_;
};

/// Query-to-frame relevance for one (video, sub-event) pair.
///
/// Values are cosine similarities. Construction rejects tracks shorter than
/// two frames, non-finite values, non-positive fps, and values outside
/// [-1, 1] by more than kClampSlack; values inside the slack band are clamped.
class SimilarityTrack {
 public:
  static constexpr double kClampSlack = 1e-3;

  SimilarityTrack(std::string video_id, std::vector<double> values, double fps);

  const std::string& video_id() const { return video_id_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double fps() const { return fps_; }

  friend bool operator==(const SimilarityTrack&, const SimilarityTrack&) = default;

 private:
  std::string video_id_;
  std::vector<double> values_;
  double fps_;
};

struct ScoringParams {
  double delta = 5e-4;
  double gaussian_sigma = 0.5;
  int topk = 3;
  double nms_iou = 0.7;
  int min_frames = 2;

  /// Throws InputError when a field is out of range.
  void validate() const;
};

/// Candidate interval [start, end) in frames. `split` is the first frame of
/// the static part; frames [start, split) form the dynamic part.
struct ScoredProposal {
  std::ptrdiff_t start = 0;
  std::ptrdiff_t end = 0;
  std::ptrdiff_t split = 0;
  double dynamic_score = 0.0;
  double static_score = 0.0;
  double final_score = 0.0;

  std::ptrdiff_t length() const { return end - start; }

  friend bool operator==(const ScoredProposal&, const ScoredProposal&) = default;
};

/// Ranking order used everywhere a list of proposals is sorted: higher
/// score, then earlier start, then shorter interval, then smaller split.
bool ranks_before(const ScoredProposal& a, const ScoredProposal& b);

SimilarityTrack cosine_similarity(const EmbeddingSet& e);

/// Truncated Gaussian filter (radius ceil(3 sigma)). Near the borders the
/// kernel is renormalized over the taps that fall inside the signal.
std::vector<double> gaussian_smooth(std::span<const double> values, double sigma);

/// out[l - 1] = smoothed[l] - smoothed[l - 1] for l in 1..N-1.
std::vector<double> differences(std::span<const double> smoothed);

/// Sum of diffs over transitions a+1..b when every one of them exceeds
/// delta, otherwise 0. `diffs` is the output of differences(), so the
/// transition into frame l lives at diffs[l - 1].
double dynamic_score(std::span<const double> diffs, std::ptrdiff_t a, std::ptrdiff_t b,
                     double delta);

/// Inside-minus-outside mean of the raw similarity over [k, j).
double static_score(std::span<const double> values, std::ptrdiff_t k, std::ptrdiff_t j);

}  // namespace tfvtg

#include "tfvtg/localizer.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "tfvtg/error.hpp"
#include "tfvtg/kernels.hpp"

namespace tfvtg {

namespace {

std::vector<double> pivoted(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  const double pivot = values.front();
  for (double& v : out) v -= pivot;
  return out;
}

double frame_iou(const ScoredProposal& a, const ScoredProposal& b) {
  const auto inter = std::max<std::ptrdiff_t>(0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const auto uni = a.length() + b.length() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

void require_localizable(const SimilarityTrack& track, const ScoringParams& params) {
  params.validate();
  if (track.size() < static_cast<std::size_t>(params.min_frames) + 1)
    throw InputError(fmt::format("track '{}' has {} frames; need at least min_frames + 1 = {}",
                                 track.video_id(), track.size(), params.min_frames + 1));
}

std::vector<ScoredProposal> rank_and_suppress(std::vector<ScoredProposal> all,
                                              const ScoringParams& params) {
  std::sort(all.begin(), all.end(), ranks_before);
  return suppress(all, params.nms_iou, static_cast<std::size_t>(params.topk));
}

}  // namespace

PrefixSums::PrefixSums(std::span<const double> values) : prefix_(values.size() + 1, 0.0) {
  for (std::size_t n = 0; n < values.size(); ++n) prefix_[n + 1] = prefix_[n] + values[n];
}

double PrefixSums::static_score(std::ptrdiff_t k, std::ptrdiff_t j) const {
  const auto n = static_cast<std::ptrdiff_t>(size());
  const double inside = sum(k, j);
  const double outside = total() - inside;
  return inside / static_cast<double>(j - k) - outside / static_cast<double>(n - (j - k));
}

ProposalScorer::ProposalScorer(const SimilarityTrack& track, const ScoringParams& params)
    : params_(params),
      smoothed_(gaussian_smooth(pivoted(track.values()), params.gaussian_sigma)),
      run_end_(smoothed_.size()),
      sums_(pivoted(track.values())) {
  params_.validate();
  const auto n = frames();
  run_end_[n - 1] = n - 1;
  for (std::ptrdiff_t a = n - 2; a >= 0; --a)
    run_end_[a] = (smoothed_[a + 1] - smoothed_[a] > params_.delta) ? run_end_[a + 1] : a;
}

bool ProposalScorer::admissible(std::ptrdiff_t i, std::ptrdiff_t j) const {
  return i >= 0 && j <= frames() && j - i >= params_.min_frames && j - i < frames();
}

ScoredProposal ProposalScorer::score(std::ptrdiff_t i, std::ptrdiff_t j) const {
  if (!admissible(i, j))
    throw InputError(fmt::format("proposal [{}, {}) is not admissible for {} frames, min_frames {}",
                                 i, j, frames(), params_.min_frames));
  ScoredProposal best{i, j, i, 0.0, 0.0, 0.0};
  bool have = false;
  for (std::ptrdiff_t k = i; k < j; ++k) {
    const double dyn = dynamic(i, k);
    const double stat = static_part(k, j);
    const double total = dyn + stat;
    if (!have || total > best.final_score) {
      best = {i, j, k, dyn, stat, total};
      have = true;
    }
  }
  return best;
}

ScoredProposal proposal_score(const SimilarityTrack& track, const ScoringParams& params,
                              std::ptrdiff_t i, std::ptrdiff_t j) {
  return ProposalScorer(track, params).score(i, j);
}

std::vector<ScoredProposal> suppress(std::span<const ScoredProposal> ranked, double iou_threshold,
                                     std::size_t limit) {
  std::vector<ScoredProposal> kept;
  for (const auto& p : ranked) {
    if (kept.size() >= limit) break;
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const ScoredProposal& q) {
      return frame_iou(p, q) > iou_threshold;
    });
    if (!overlaps) kept.push_back(p);
  }
  return kept;
}

std::vector<ScoredProposal> localize_topk(const SimilarityTrack& track, const ScoringParams& params) {
  require_localizable(track, params);
  const ProposalScorer scorer(track, params);
  return rank_and_suppress(kernels::score_all_parallel(scorer), params);
}

std::vector<ScoredProposal> localize_topk_serial(const SimilarityTrack& track,
                                                 const ScoringParams& params) {
  require_localizable(track, params);
  const ProposalScorer scorer(track, params);
  return rank_and_suppress(kernels::score_all_serial(scorer), params);
}

ScoredProposal naive_baseline(const SimilarityTrack& track, int min_frames) {
  if (min_frames < 1) throw InputError("min_frames must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(track.size());
  if (n < min_frames + 1)
    throw InputError(fmt::format("track '{}' has {} frames; need at least min_frames + 1 = {}",
                                 track.video_id(), n, min_frames + 1));
  const PrefixSums sums(pivoted(track.values()));
  ScoredProposal best;
  double best_mean = 0.0;
  bool have = false;
  // Ascending i then j with a strict comparison keeps the earliest start and
  // then the shortest interval among equal means.
  for (std::ptrdiff_t i = 0; i + min_frames <= n; ++i) {
    for (std::ptrdiff_t j = i + min_frames; j <= n; ++j) {
      const double mean = sums.sum(i, j) / static_cast<double>(j - i);
      if (!have || mean > best_mean) {
        best_mean = mean;
        best = {i, j, i, 0.0, 0.0, 0.0};
        have = true;
      }
    }
  }
  best.static_score = best_mean + track.values().front();
  best.final_score = best.static_score;
  return best;
}

}  // namespace tfvtg

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tfvtg/signal.hpp"

namespace tfvtg {

/// Prefix sums of a similarity signal for O(1) inside/outside means.
class PrefixSums {
 public:
  explicit PrefixSums(std::span<const double> values);

  std::size_t size() const { return prefix_.size() - 1; }
  double sum(std::ptrdiff_t begin, std::ptrdiff_t end) const { return prefix_[end] - prefix_[begin]; }
  double total() const { return prefix_.back(); }

  /// mean([k, j)) - mean(outside [k, j)); requires 0 <= k < j <= N, j - k < N.
  double static_score(std::ptrdiff_t k, std::ptrdiff_t j) const;

 private:
  std::vector<double> prefix_;
};

/// Precomputed state for scoring every proposal of one track.
///
/// Both scores are invariant to adding a constant to the track, so the
/// scorer works on S - S[0]. Constant tracks then score exactly zero.
class ProposalScorer {
 public:
  ProposalScorer(const SimilarityTrack& track, const ScoringParams& params);

  std::ptrdiff_t frames() const { return static_cast<std::ptrdiff_t>(smoothed_.size()); }
  const ScoringParams& params() const { return params_; }

  /// Smoothed, pivoted signal used by the dynamic score.
  std::span<const double> smoothed() const { return smoothed_; }

  /// Largest b >= a such that every transition a+1..b exceeds delta.
  std::ptrdiff_t run_end(std::ptrdiff_t a) const { return run_end_[a]; }

  /// Dynamic score of [a, b) via the telescoped run; 0 outside the run.
  double dynamic(std::ptrdiff_t a, std::ptrdiff_t b) const {
    return (b > a && b <= run_end_[a]) ? smoothed_[b] - smoothed_[a] : 0.0;
  }
  double static_part(std::ptrdiff_t k, std::ptrdiff_t j) const { return sums_.static_score(k, j); }

  bool admissible(std::ptrdiff_t i, std::ptrdiff_t j) const;

  /// Best split of [i, j) by direct enumeration of k = i..j-1. Throws
  /// InputError for inadmissible (i, j).
  ScoredProposal score(std::ptrdiff_t i, std::ptrdiff_t j) const;

 private:
  ScoringParams params_;
  std::vector<double> smoothed_;
  std::vector<std::ptrdiff_t> run_end_;
  PrefixSums sums_;
};

ScoredProposal proposal_score(const SimilarityTrack& track, const ScoringParams& params,
                              std::ptrdiff_t i, std::ptrdiff_t j);

/// Greedy 1-D NMS over proposals already sorted by ranks_before; keeps a
/// proposal when its IoU with every kept one is <= iou_threshold and stops
/// after `limit` survivors.
std::vector<ScoredProposal> suppress(std::span<const ScoredProposal> ranked, double iou_threshold,
                                     std::size_t limit);

/// Top-k proposals after NMS, best first. Scores with the OpenMP kernel.
std::vector<ScoredProposal> localize_topk(const SimilarityTrack& track, const ScoringParams& params);

/// Same contract as localize_topk, scored with the serial reference kernel.
std::vector<ScoredProposal> localize_topk_serial(const SimilarityTrack& track,
                                                 const ScoringParams& params);

/// Highest-mean interval with length >= min_frames (full video allowed).
ScoredProposal naive_baseline(const SimilarityTrack& track, int min_frames);

}  // namespace tfvtg

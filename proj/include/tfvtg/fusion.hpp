#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfvtg/planner.hpp"
#include "tfvtg/signal.hpp"

namespace tfvtg {

/// Half-open frame interval.
struct FrameInterval {
  std::ptrdiff_t start = 0;
  std::ptrdiff_t end = 0;

  std::ptrdiff_t length() const { return end - start; }
  friend bool operator==(const FrameInterval&, const FrameInterval&) = default;
};

/// One proposal per sub-event, in plan order.
struct Combination {
  std::vector<ScoredProposal> members;
  double total_score = 0.0;
};

struct SubEventSpan {
  std::string description;
  double start_sec = 0.0;
  double end_sec = 0.0;
};

/// Steps of the fallback ladder that predict() had to take.
enum class FusionFallback { kOrderRelaxed, kIntersectionRelaxed };

std::string_view to_string(FusionFallback f);

struct FinalPrediction {
  std::string video_id;
  std::string query;
  double start_sec = 0.0;
  double end_sec = 0.0;
  std::vector<SubEventSpan> per_subevent;
  Relation relation = Relation::kSingle;
  double combo_score = 0.0;
  PlanSource plan_source = PlanSource::kFallback;
  std::vector<FusionFallback> fallbacks;

  /// Plan source plus any fallbacks, joined with '+', e.g. "llm+order_relaxed".
  std::string provenance() const;
};

/// Cartesian product of the candidate lists, last sub-event varying fastest.
std::vector<Combination> enumerate_combinations(std::span<const std::vector<ScoredProposal>> candidates);

/// True when no earlier-ranked member starts strictly after the end of a
/// later-ranked one. `order[n]` is the chronological rank of member n.
bool order_consistent(const Combination& combo, std::span<const int> order);

std::vector<Combination> order_filter(std::span<const Combination> combos, std::span<const int> order);

/// Intersection for simultaneously, bounding interval otherwise. Returns
/// nullopt when an intersection is empty.
std::optional<FrameInterval> merge_relation(std::span<const FrameInterval> members, Relation relation);

FinalPrediction predict(const QueryPlan& plan, std::span<const std::vector<ScoredProposal>> candidates,
                        double fps, const std::string& video_id);

}  // namespace tfvtg

#include "tfvtg/fusion.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "tfvtg/error.hpp"

namespace tfvtg {

namespace {

struct Candidate {
  const Combination* combo;
  FrameInterval merged;
};

std::vector<Candidate> mergeable(std::span<const Combination> combos, Relation relation) {
  std::vector<Candidate> out;
  std::vector<FrameInterval> members;
  for (const auto& combo : combos) {
    members.clear();
    for (const auto& p : combo.members) members.push_back({p.start, p.end});
    if (auto merged = merge_relation(members, relation)) out.push_back({&combo, *merged});
  }
  return out;
}

}  // namespace

std::string_view to_string(FusionFallback f) {
  switch (f) {
    case FusionFallback::kOrderRelaxed: return "order_relaxed";
    case FusionFallback::kIntersectionRelaxed: return "intersection_relaxed";
  }
  return "";
}

std::string FinalPrediction::provenance() const {
  std::string out(to_string(plan_source));
  for (auto f : fallbacks) {
    out += '+';
    out += to_string(f);
  }
  return out;
}

std::vector<Combination> enumerate_combinations(std::span<const std::vector<ScoredProposal>> candidates) {
  if (candidates.empty()) throw InputError("fusion: no sub-events to combine");
  for (std::size_t n = 0; n < candidates.size(); ++n)
    if (candidates[n].empty())
      throw InputError(fmt::format("fusion: sub-event {} has no candidate proposals", n));

  std::vector<Combination> out;
  std::vector<std::size_t> index(candidates.size(), 0);
  while (true) {
    Combination combo;
    for (std::size_t n = 0; n < candidates.size(); ++n) {
      combo.members.push_back(candidates[n][index[n]]);
      combo.total_score += candidates[n][index[n]].final_score;
    }
    out.push_back(std::move(combo));

    std::size_t pos = candidates.size();
    while (pos > 0) {
      --pos;
      if (++index[pos] < candidates[pos].size()) break;
      index[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

bool order_consistent(const Combination& combo, std::span<const int> order) {
  const auto& m = combo.members;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      if (order[a] < order[b] && m[a].start > m[b].end) return false;
  return true;
}

std::vector<Combination> order_filter(std::span<const Combination> combos, std::span<const int> order) {
  std::vector<Combination> out;
  for (const auto& c : combos) {
    if (c.members.size() != order.size())
      throw InputError("fusion: combination size does not match the plan order");
    if (order_consistent(c, order)) out.push_back(c);
  }
  return out;
}

std::optional<FrameInterval> merge_relation(std::span<const FrameInterval> members, Relation relation) {
  if (members.empty()) throw InputError("fusion: nothing to merge");
  FrameInterval out = members.front();
  for (const auto& iv : members.subspan(1)) {
    if (relation == Relation::kSimultaneously) {
      out.start = std::max(out.start, iv.start);
      out.end = std::min(out.end, iv.end);
    } else {
      out.start = std::min(out.start, iv.start);
      out.end = std::max(out.end, iv.end);
    }
  }
  if (out.end <= out.start) return std::nullopt;
  return out;
}

FinalPrediction predict(const QueryPlan& plan, std::span<const std::vector<ScoredProposal>> candidates,
                        double fps, const std::string& video_id) {
  if (candidates.size() != plan.size())
    throw InputError(fmt::format("fusion: plan has {} sub-events but {} candidate lists were given",
                                 plan.size(), candidates.size()));
  if (!(fps > 0)) throw InputError("fusion: fps must be > 0");

  FinalPrediction pred;
  pred.video_id = video_id;
  pred.query = plan.original_query;
  pred.relation = plan.relation;
  pred.plan_source = plan.provenance;

  const std::vector<Combination> all = enumerate_combinations(candidates);
  std::vector<int> order;
  for (const auto& e : plan.sub_events) order.push_back(e.order);

  std::vector<Combination> kept = order_filter(all, order);
  if (kept.empty()) {
    kept = all;
    pred.fallbacks.push_back(FusionFallback::kOrderRelaxed);
  }

  std::vector<Candidate> valid = mergeable(kept, plan.relation);
  if (valid.empty() && plan.relation == Relation::kSimultaneously) {
    valid = mergeable(kept, Relation::kSequentially);
    pred.fallbacks.push_back(FusionFallback::kIntersectionRelaxed);
  }
  if (valid.empty()) throw InputError("fusion: no combination produced a valid interval");

  // Stable: among full ties the earliest enumerated combination wins.
  const auto best = std::min_element(valid.begin(), valid.end(), [](const Candidate& a, const Candidate& b) {
    if (a.combo->total_score != b.combo->total_score) return a.combo->total_score > b.combo->total_score;
    if (a.merged.start != b.merged.start) return a.merged.start < b.merged.start;
    return a.merged.length() < b.merged.length();
  });

  pred.start_sec = static_cast<double>(best->merged.start) / fps;
  pred.end_sec = static_cast<double>(best->merged.end) / fps;
  pred.combo_score = best->combo->total_score;
  for (std::size_t n = 0; n < plan.size(); ++n) {
    const auto& p = best->combo->members[n];
    pred.per_subevent.push_back({plan.sub_events[n].description, static_cast<double>(p.start) / fps,
                                 static_cast<double>(p.end) / fps});
  }
  return pred;
}

}  // namespace tfvtg

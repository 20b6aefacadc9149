#include "tfvtg/pipeline.hpp"

#include <exception>

#include <fmt/format.h>

#include "tfvtg/error.hpp"
#include "tfvtg/localizer.hpp"

namespace tfvtg {

QueryPlan make_plan(std::string_view query, const PipelineConfig& cfg) {
  return cfg.planner ? plan_query(query, *cfg.planner) : fallback_plan(query);
}

ProposalSet localize_plan(const QueryPlan& plan, std::span<const SimilarityTrack> tracks,
                          const ScoringParams& params, LocalizeMethod method) {
  if (tracks.size() != plan.size())
    throw InputError(fmt::format("plan has {} sub-events but {} tracks were given", plan.size(),
                                 tracks.size()));
  ProposalSet set;
  set.video_id = tracks.front().video_id();
  set.fps = tracks.front().fps();
  set.sub_events = plan.sub_events;
  for (const auto& track : tracks) {
    if (track.fps() != set.fps)
      throw InputError(fmt::format("tracks of video '{}' disagree on fps ({} vs {})", set.video_id,
                                   track.fps(), set.fps));
    if (method == LocalizeMethod::kNaiveBaseline)
      set.proposals.push_back({naive_baseline(track, params.min_frames)});
    else
      set.proposals.push_back(localize_topk(track, params));
  }
  return set;
}

std::vector<SimilarityTrack> tracks_for_plan(const QueryPlan& plan, const TrackIndex& index,
                                             std::string_view video_id) {
  std::vector<SimilarityTrack> tracks;
  for (const auto& e : plan.sub_events) tracks.push_back(index.read(video_id, e.description));
  return tracks;
}

FinalPrediction fuse(const QueryPlan& plan, const ProposalSet& proposals) {
  if (proposals.sub_events != plan.sub_events)
    throw InputError("proposals file does not match the plan's sub-events");
  return predict(plan, proposals.proposals, proposals.fps, proposals.video_id);
}

std::vector<FinalPrediction> run_pipeline(std::span<const Annotation> annotations,
                                          const TrackIndex& index, const PipelineConfig& cfg,
                                          LocalizeMethod method) {
  const auto count = static_cast<std::ptrdiff_t>(annotations.size());
  std::vector<FinalPrediction> out(annotations.size());
  std::vector<std::exception_ptr> errors(annotations.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    try {
      const Annotation& ann = annotations[n];
      const QueryPlan plan = make_plan(ann.query, cfg);
      const auto tracks = tracks_for_plan(plan, index, ann.video_id);
      out[n] = fuse(plan, localize_plan(plan, tracks, cfg.scoring, method));
    } catch (...) {
      errors[n] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace tfvtg

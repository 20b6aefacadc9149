#pragma once

#include <span>
#include <vector>

#include "tfvtg/config.hpp"
#include "tfvtg/eval.hpp"
#include "tfvtg/fusion.hpp"
#include "tfvtg/io.hpp"
#include "tfvtg/planner.hpp"

namespace tfvtg {

enum class LocalizeMethod { kDynamicStatic, kNaiveBaseline };

/// The configured planner, or the single-event fallback when it is absent.
QueryPlan make_plan(std::string_view query, const PipelineConfig& cfg);

/// Scores each sub-event against its track (plan order). All tracks must
/// share the same fps.
ProposalSet localize_plan(const QueryPlan& plan, std::span<const SimilarityTrack> tracks,
                          const ScoringParams& params, LocalizeMethod method);

/// Loads the track of every sub-event of `plan` for `video_id`.
std::vector<SimilarityTrack> tracks_for_plan(const QueryPlan& plan, const TrackIndex& index,
                                             std::string_view video_id);

FinalPrediction fuse(const QueryPlan& plan, const ProposalSet& proposals);

/// plan -> localize -> fuse for every annotation, in annotation order.
std::vector<FinalPrediction> run_pipeline(std::span<const Annotation> annotations,
                                          const TrackIndex& index, const PipelineConfig& cfg,
                                          LocalizeMethod method);

}  // namespace tfvtg

#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "tfvtg/eval.hpp"
#include "tfvtg/planner.hpp"
#include "tfvtg/signal.hpp"

namespace tfvtg {

/// Defaults reproduce the published setting (delta 5e-4, top-3 per
/// sub-event). Tracks are expected at 3 FPS, but nothing here depends on it.
struct PipelineConfig {
  ScoringParams scoring;
  std::optional<PlannerConfig> planner;  // absent: LLM disabled
  std::vector<double> thresholds = kDefaultThresholds;
};

/// Sorts, deduplicates and range-checks IoU thresholds.
std::vector<double> normalize_thresholds(std::vector<double> thresholds);

/// `key = value` lines, '#' starts a comment. Keys:
///   delta, gaussian_sigma, topk, nms_iou, min_frames, thresholds (comma list),
///   planner.endpoint_url, planner.model_name, planner.api_key_env_var,
///   planner.max_retries, planner.timeout_sec, planner.cache_dir
/// Any planner.* key enables the planner.
PipelineConfig parse_config(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace tfvtg

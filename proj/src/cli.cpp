#include "tfvtg/cli.hpp"

#include <iostream>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "tfvtg/config.hpp"
#include "tfvtg/error.hpp"
#include "tfvtg/io.hpp"
#include "tfvtg/pipeline.hpp"

namespace tfvtg {

namespace {

namespace fs = std::filesystem;

// Flags shared by subcommands. Unset optionals leave the config file value.
struct CommonFlags {
  std::string config_path;
  std::optional<double> delta, sigma, nms_iou;
  std::optional<int> topk, min_frames;
  bool no_llm = false;
  std::optional<std::string> endpoint, model, api_key_env, cache_dir;
  std::optional<int> max_retries;
  std::optional<double> timeout;
  std::string method = "dynamic-static";

  void add_scoring(CLI::App& app) {
    app.add_option("--config", config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
    app.add_option("--delta", delta, "Difference threshold for the dynamic part");
    app.add_option("--sigma", sigma, "Gaussian smoothing width in frames");
    app.add_option("--topk", topk, "Proposals kept per sub-event");
    app.add_option("--nms-iou", nms_iou, "IoU above which a lower-ranked proposal is suppressed");
    app.add_option("--min-frames", min_frames, "Shortest proposal in frames");
  }

  void add_planner(CLI::App& app) {
    app.add_flag("--no-llm", no_llm, "Skip the LLM and use the query as the only sub-event");
    app.add_option("--endpoint", endpoint, "Chat-completions URL");
    app.add_option("--model", model, "Model name sent to the endpoint");
    app.add_option("--api-key-env", api_key_env, "Environment variable holding the API key");
    app.add_option("--max-retries", max_retries, "Retries after a failed or unparseable reply (0-5)");
    app.add_option("--timeout", timeout, "Request timeout in seconds");
    app.add_option("--cache-dir", cache_dir, "Directory for cached model replies");
  }

  void add_method(CLI::App& app) {
    app.add_option("--method", method, "dynamic-static or naive-baseline")
        ->check(CLI::IsMember({"dynamic-static", "naive-baseline"}));
  }

  LocalizeMethod localize_method() const {
    return method == "naive-baseline" ? LocalizeMethod::kNaiveBaseline : LocalizeMethod::kDynamicStatic;
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
    if (delta) cfg.scoring.delta = *delta;
    if (sigma) cfg.scoring.gaussian_sigma = *sigma;
    if (topk) cfg.scoring.topk = *topk;
    if (nms_iou) cfg.scoring.nms_iou = *nms_iou;
    if (min_frames) cfg.scoring.min_frames = *min_frames;
    cfg.scoring.validate();

    if (endpoint || model || api_key_env || cache_dir || max_retries || timeout)
      if (!cfg.planner) cfg.planner.emplace();
    if (cfg.planner) {
      if (endpoint) cfg.planner->endpoint_url = *endpoint;
      if (model) cfg.planner->model_name = *model;
      if (api_key_env) cfg.planner->api_key_env_var = *api_key_env;
      if (cache_dir) cfg.planner->cache_dir = *cache_dir;
      if (max_retries) cfg.planner->max_retries = *max_retries;
      if (timeout) cfg.planner->timeout = std::chrono::duration<double>(*timeout);
      cfg.planner->validate();
    }
    if (no_llm) cfg.planner.reset();
    return cfg;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Training-free video temporal grounding over frame-text similarity tracks"};
  app.require_subcommand(1);
  CommonFlags flags;

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Decompose a query into sub-events");
  std::string query;
  fs::path out_path;
  plan_cmd->add_option("--query", query, "Natural-language query")->required();
  plan_cmd->add_option("-o,--output", out_path, "Plan file to write")->required();
  plan_cmd->add_option("--config", flags.config_path, "Config file")->check(CLI::ExistingFile);
  flags.add_planner(*plan_cmd);

  // localize
  auto* localize_cmd = app.add_subcommand("localize", "Score proposals for every sub-event of a plan");
  fs::path plan_path, track_dir;
  std::vector<fs::path> track_paths;
  std::string video_id;
  localize_cmd->add_option("--plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  auto* track_opt = localize_cmd->add_option("--track", track_paths, "Track file per sub-event, plan order")
                        ->check(CLI::ExistingFile);
  auto* dir_opt = localize_cmd->add_option("--track-dir", track_dir, "Track directory with index.jsonl")
                      ->check(CLI::ExistingDirectory);
  localize_cmd->add_option("--video-id", video_id, "Video to look up in --track-dir");
  track_opt->excludes(dir_opt);
  localize_cmd->add_option("-o,--output", out_path, "Proposals file to write")->required();
  flags.add_scoring(*localize_cmd);
  flags.add_method(*localize_cmd);

  // fuse
  auto* fuse_cmd = app.add_subcommand("fuse", "Combine per-sub-event proposals into one prediction");
  fs::path proposals_path;
  fuse_cmd->add_option("--plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  fuse_cmd->add_option("--proposals", proposals_path, "Proposals file")->required()->check(CLI::ExistingFile);
  fuse_cmd->add_option("-o,--output", out_path, "Predictions file to write (one line)")->required();

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "plan + localize + fuse for an annotation file");
  fs::path annotations_path;
  pipeline_cmd->add_option("--annotations", annotations_path, "Annotation records (JSON lines)")
      ->required()->check(CLI::ExistingFile);
  pipeline_cmd->add_option("--track-dir", track_dir, "Track directory with index.jsonl")
      ->required()->check(CLI::ExistingDirectory);
  pipeline_cmd->add_option("-o,--output", out_path, "Predictions file to write")->required();
  flags.add_scoring(*pipeline_cmd);
  flags.add_planner(*pipeline_cmd);
  flags.add_method(*pipeline_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "R@m and mIoU of predictions against annotations");
  fs::path predictions_path;
  std::vector<double> thresholds;
  eval_cmd->add_option("--predictions", predictions_path, "Predictions file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--annotations", annotations_path, "Annotation records")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--thresholds", thresholds, "IoU thresholds")->delimiter(',');
  eval_cmd->add_option("--config", flags.config_path, "Config file")->check(CLI::ExistingFile);
  eval_cmd->add_option("-o,--output", out_path, "Report file (JSON)");

  // ood-shift
  auto* ood_cmd = app.add_subcommand("ood-shift", "Prepend noise frames and shift annotations");
  double prefix_sec = 0.0;
  std::uint64_t seed = 0;
  NoiseBand band;
  fs::path out_annotations, out_track_dir;
  ood_cmd->add_option("--annotations", annotations_path, "Annotation records")->required()->check(CLI::ExistingFile);
  ood_cmd->add_option("--track-dir", track_dir, "Track directory with index.jsonl")
      ->required()->check(CLI::ExistingDirectory);
  ood_cmd->add_option("--prefix-sec", prefix_sec, "Seconds of noise to prepend")->required()
      ->check(CLI::PositiveNumber);
  ood_cmd->add_option("--seed", seed, "Random seed")->required();
  ood_cmd->add_option("--noise-low", band.low, "Lower bound of the noise similarity");
  ood_cmd->add_option("--noise-high", band.high, "Upper bound of the noise similarity");
  ood_cmd->add_option("--out-annotations", out_annotations, "Shifted annotations to write")->required();
  ood_cmd->add_option("--out-track-dir", out_track_dir, "Directory for shifted tracks")->required();

  // similarity
  auto* sim_cmd = app.add_subcommand("similarity", "Cosine similarity track from an embedding file");
  fs::path embeddings_path;
  sim_cmd->add_option("--embeddings", embeddings_path, "Embedding file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("-o,--output", out_path, "Track file to write (.tfvt for binary)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*plan_cmd) {
      const QueryPlan plan = make_plan(query, flags.resolve());
      write_file_atomic(out_path, encode_plan(plan));
      std::cout << fmt::format("plan: {} sub-event(s), relation {}, source {}\n", plan.size(),
                               to_string(plan.relation), to_string(plan.provenance));
    } else if (*localize_cmd) {
      const PipelineConfig cfg = flags.resolve();
      const QueryPlan plan = decode_plan(read_file(plan_path));
      std::vector<SimilarityTrack> tracks;
      if (!track_paths.empty()) {
        for (const auto& p : track_paths) tracks.push_back(read_track(p));
      } else {
        if (track_dir.empty() || video_id.empty())
          throw InputError("localize needs --track (one per sub-event) or --track-dir with --video-id");
        tracks = tracks_for_plan(plan, TrackIndex::load(track_dir), video_id);
      }
      write_file_atomic(out_path, encode_proposals(localize_plan(plan, tracks, cfg.scoring,
                                                                 flags.localize_method())));
    } else if (*fuse_cmd) {
      const QueryPlan plan = decode_plan(read_file(plan_path));
      const FinalPrediction pred = fuse(plan, decode_proposals(read_file(proposals_path)));
      write_predictions(std::span(&pred, 1), out_path);
      std::cout << encode_prediction(pred) << "\n";
    } else if (*pipeline_cmd) {
      const PipelineConfig cfg = flags.resolve();
      const auto annotations = read_annotations(annotations_path);
      const auto preds = run_pipeline(annotations, TrackIndex::load(track_dir), cfg, flags.localize_method());
      write_predictions(preds, out_path);
      std::cout << fmt::format("pipeline: wrote {} prediction(s) to {}\n", preds.size(), out_path.string());
    } else if (*eval_cmd) {
      PipelineConfig cfg = flags.config_path.empty() ? PipelineConfig{} : load_config(flags.config_path);
      if (!thresholds.empty()) cfg.thresholds = normalize_thresholds(thresholds);
      const auto report = evaluate(read_predictions(predictions_path), read_annotations(annotations_path),
                                   cfg.thresholds);
      if (!out_path.empty()) write_file_atomic(out_path, encode_report(report));
      std::cout << report.table();
    } else if (*ood_cmd) {
      const auto annotations = read_annotations(annotations_path);
      const TrackIndex index = TrackIndex::load(track_dir);
      TrackIndex shifted_index(out_track_dir);
      std::vector<Annotation> shifted_annotations;
      for (const auto& ann : annotations) shifted_annotations.push_back(shift_annotation(ann, prefix_sec));
      // Each index entry draws from its own stream derived from (seed, position).
      const auto entries = index.entries();
      for (std::size_t n = 0; n < entries.size(); ++n) {
        const auto& e = entries[n];
        const std::uint64_t entry_seed = seed + 0x9e3779b97f4a7c15ULL * (n + 1);
        const auto shifted = prepend_noise(read_track(index.dir() / e.path), prefix_sec, entry_seed, band);
        write_track(shifted, out_track_dir / e.path);
        shifted_index.add(e);
      }
      shifted_index.save();
      write_annotations(shifted_annotations, out_annotations);
      std::cout << fmt::format("ood-shift: {} annotation(s), {} track(s), +{} s\n",
                               shifted_annotations.size(), entries.size(), prefix_sec);
    } else if (*sim_cmd) {
      write_track(cosine_similarity(decode_embeddings(read_file(embeddings_path))), out_path);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace tfvtg

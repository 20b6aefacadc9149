#include "tfvtg/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "tfvtg/error.hpp"
#include "tfvtg/io.hpp"

namespace tfvtg {

namespace {

std::string_view strip(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw InputError(fmt::format("config: '{}' expects a number, got '{}'", key, value));
  return out;
}

}  // namespace

std::vector<double> normalize_thresholds(std::vector<double> thresholds) {
  if (thresholds.empty()) throw InputError("at least one IoU threshold is required");
  for (double m : thresholds)
    if (!(m > 0 && m < 1)) throw InputError(fmt::format("IoU threshold {} is not in (0, 1)", m));
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  return thresholds;
}

PipelineConfig parse_config(std::string_view text, PipelineConfig cfg) {
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int number = 1; std::getline(in, raw); ++number) {
    std::string_view line = raw;
    line = strip(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InputError(fmt::format("config line {}: expected 'key = value'", number));
    const auto key = strip(line.substr(0, eq));
    const auto value = strip(line.substr(eq + 1));

    if (key.starts_with("planner.") && !cfg.planner) cfg.planner.emplace();
    if (key == "delta") cfg.scoring.delta = parse_number<double>(key, value);
    else if (key == "gaussian_sigma") cfg.scoring.gaussian_sigma = parse_number<double>(key, value);
    else if (key == "topk") cfg.scoring.topk = parse_number<int>(key, value);
    else if (key == "nms_iou") cfg.scoring.nms_iou = parse_number<double>(key, value);
    else if (key == "min_frames") cfg.scoring.min_frames = parse_number<int>(key, value);
    else if (key == "thresholds") {
      std::vector<double> list;
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        list.push_back(parse_number<double>(key, strip(rest.substr(0, comma))));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      cfg.thresholds = normalize_thresholds(std::move(list));
    } else if (key == "planner.endpoint_url") cfg.planner->endpoint_url = value;
    else if (key == "planner.model_name") cfg.planner->model_name = value;
    else if (key == "planner.api_key_env_var") cfg.planner->api_key_env_var = value;
    else if (key == "planner.max_retries") cfg.planner->max_retries = parse_number<int>(key, value);
    else if (key == "planner.timeout_sec")
      cfg.planner->timeout = std::chrono::duration<double>(parse_number<double>(key, value));
    else if (key == "planner.cache_dir") cfg.planner->cache_dir = std::string(value);
    else throw InputError(fmt::format("config line {}: unknown key '{}'", number, key));
  }
  cfg.scoring.validate();
  if (cfg.planner) cfg.planner->validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path));
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace tfvtg

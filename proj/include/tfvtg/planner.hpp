#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tfvtg {

enum class Relation { kSingle, kSimultaneously, kSequentially };

std::string_view to_string(Relation r);
/// Parses one of "single", "simultaneously", "sequentially"; throws
/// ParseFailure otherwise.
Relation relation_from_string(std::string_view s);

enum class PlanSource { kLlm, kCache, kFallback };

std::string_view to_string(PlanSource s);
PlanSource plan_source_from_string(std::string_view s);

struct SubEvent {
  std::string description;
  int order = 0;

  friend bool operator==(const SubEvent&, const SubEvent&) = default;
};

/// Sub-events are stored in chronological order, so sub_events[n].order == n.
struct QueryPlan {
  std::string original_query;
  std::string reasoning;
  Relation relation = Relation::kSingle;
  std::vector<SubEvent> sub_events;
  PlanSource provenance = PlanSource::kFallback;

  std::size_t size() const { return sub_events.size(); }

  friend bool operator==(const QueryPlan&, const QueryPlan&) = default;
};

/// Largest number of sub-events accepted from the model.
inline constexpr std::size_t kMaxSubEvents = 4;

struct PlannerConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_name = "gpt-4-turbo";
  std::string api_key_env_var = "OPENAI_API_KEY";
  int max_retries = 2;
  std::chrono::duration<double> timeout{30.0};
  std::filesystem::path cache_dir = ".tfvtg_cache";

  void validate() const;
};

/// Sends one prompt to a chat model and returns the text of the first choice.
/// Implementations throw TransportError on network or protocol failure.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Chat-completions over HTTP(S). The API key is read from the environment
/// variable named in the config at construction; a missing variable means
/// no Authorization header is sent.
class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(const PlannerConfig& cfg);
  std::string complete(const std::string& prompt) override;

 private:
  PlannerConfig cfg_;
  std::string api_key_;
};

std::string build_prompt(std::string_view query);

/// Extracts the first well-formed JSON object from free-form model output
/// and validates it into a plan. Order values are renumbered 0..m-1 by rank,
/// and a multi-event relation with one sub-event is coerced to single.
QueryPlan parse_plan(std::string_view raw, std::string_view original_query);

/// The "no LLM" plan: a single sub-event carrying the query itself.
QueryPlan fallback_plan(std::string_view query);

/// Cache key for (prompt, model): hex SHA-256.
std::string cache_key(std::string_view prompt, std::string_view model_name);

QueryPlan plan_query(std::string_view query, const PlannerConfig& cfg);
QueryPlan plan_query(std::string_view query, const PlannerConfig& cfg, ChatTransport& transport);

}  // namespace tfvtg

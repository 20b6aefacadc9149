#include "tfvtg/planner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "tfvtg/error.hpp"
#include "tfvtg/io.hpp"

namespace tfvtg {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto first = std::find_if(s.begin(), s.end(), not_space);
  auto last = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return first < last ? std::string(first, last) : std::string();
}

// End of the brace-balanced object starting at raw[open], honoring JSON
// string literals; npos when unbalanced.
std::size_t matching_brace(std::string_view raw, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t n = open; n < raw.size(); ++n) {
    const char c = raw[n];
    if (in_string) {
      if (c == '\\') ++n;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return n;
  }
  return std::string_view::npos;
}

std::optional<json> first_object(std::string_view raw) {
  for (std::size_t open = raw.find('{'); open != std::string_view::npos;
       open = raw.find('{', open + 1)) {
    const std::size_t close = matching_brace(raw, open);
    if (close == std::string_view::npos) continue;
    json doc = json::parse(raw.substr(open, close - open + 1), nullptr, false);
    if (!doc.is_discarded() && doc.is_object()) return doc;
  }
  return std::nullopt;
}

constexpr std::string_view kInstructions = R"(You analyze a natural-language query that describes an event in a video.
Answer with ONLY a JSON object, no other text, with these fields:
  "reasoning": a short analysis of the query and the sub-events it may contain.
  "relation": the relationship between the sub-events. Use exactly one of
      "single"          the query describes one event,
      "simultaneously"  the sub-events happen at the same time,
      "sequentially"    the sub-events happen one after another.
  "sub_events": an array of {"description": string, "order": integer}.
      Give one entry per sub-event, at most 4. "description" is a short
      self-contained caption of what is visible while the sub-event happens.
      "order" is the chronological rank starting at 0; sub-events that happen
      simultaneously may be listed in any order.

Example
Query: {"query": "a person opens the door and then walks out of the room"}
Answer: {"reasoning": "The query contains two actions; the person first opens the door and afterwards leaves the room.", "relation": "sequentially", "sub_events": [{"description": "a person opens the door", "order": 0}, {"description": "a person walks out of the room", "order": 1}]}

)";

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::kSingle: return "single";
    case Relation::kSimultaneously: return "simultaneously";
    case Relation::kSequentially: return "sequentially";
  }
  return "single";
}

Relation relation_from_string(std::string_view s) {
  if (s == "single") return Relation::kSingle;
  if (s == "simultaneously") return Relation::kSimultaneously;
  if (s == "sequentially") return Relation::kSequentially;
  throw ParseFailure(fmt::format("unknown relation '{}'", s));
}

std::string_view to_string(PlanSource s) {
  switch (s) {
    case PlanSource::kLlm: return "llm";
    case PlanSource::kCache: return "cache";
    case PlanSource::kFallback: return "fallback";
  }
  return "fallback";
}

PlanSource plan_source_from_string(std::string_view s) {
  if (s == "llm") return PlanSource::kLlm;
  if (s == "cache") return PlanSource::kCache;
  if (s == "fallback") return PlanSource::kFallback;
  throw InputError(fmt::format("unknown plan provenance '{}'", s));
}

void PlannerConfig::validate() const {
  if (max_retries < 0 || max_retries > 5) throw InputError("planner max_retries must lie in 0..5");
  if (!(timeout.count() > 0)) throw InputError("planner timeout must be > 0 seconds");
  if (endpoint_url.empty()) throw InputError("planner endpoint_url is empty");
}

std::string build_prompt(std::string_view query) {
  if (trim(query).empty()) throw InputError("cannot build a prompt for an empty query");
  std::string prompt(kInstructions);
  prompt += "Query: ";
  prompt += json{{"query", query}}.dump();
  prompt += "\nAnswer:";
  return prompt;
}

QueryPlan parse_plan(std::string_view raw, std::string_view original_query) {
  const auto doc = first_object(raw);
  if (!doc) throw ParseFailure("no JSON object in model output");

  QueryPlan plan;
  plan.original_query = std::string(original_query);
  plan.provenance = PlanSource::kLlm;
  if (auto it = doc->find("reasoning"); it != doc->end() && it->is_string())
    plan.reasoning = it->get<std::string>();

  auto rel = doc->find("relation");
  if (rel == doc->end() || !rel->is_string()) throw ParseFailure("missing relation");
  plan.relation = relation_from_string(rel->get<std::string>());

  auto events = doc->find("sub_events");
  if (events == doc->end() || !events->is_array() || events->empty())
    throw ParseFailure("missing or empty sub_events");
  if (events->size() > kMaxSubEvents)
    throw ParseFailure(fmt::format("{} sub-events exceed the limit of {}", events->size(),
                                   kMaxSubEvents));

  struct Ranked {
    double order;
    SubEvent event;
  };
  std::vector<Ranked> ranked;
  for (std::size_t n = 0; n < events->size(); ++n) {
    const json& item = (*events)[n];
    if (!item.is_object()) throw ParseFailure("sub_events entry is not an object");
    auto desc = item.find("description");
    if (desc == item.end() || !desc->is_string()) throw ParseFailure("sub-event without description");
    std::string text = trim(desc->get<std::string>());
    if (text.empty()) throw ParseFailure("sub-event with empty description");
    double order = static_cast<double>(n);
    if (auto o = item.find("order"); o != item.end()) {
      if (!o->is_number()) throw ParseFailure("sub-event order is not a number");
      order = o->get<double>();
    }
    ranked.push_back({order, {std::move(text), 0}});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.order < b.order; });
  for (std::size_t n = 0; n < ranked.size(); ++n) {
    ranked[n].event.order = static_cast<int>(n);
    plan.sub_events.push_back(std::move(ranked[n].event));
  }

  if (plan.size() == 1) plan.relation = Relation::kSingle;
  else if (plan.relation == Relation::kSingle)
    throw ParseFailure("relation 'single' with more than one sub-event");
  return plan;
}

QueryPlan fallback_plan(std::string_view query) {
  std::string text = trim(query);
  if (text.empty()) throw InputError("empty query");
  QueryPlan plan;
  plan.original_query = std::string(query);
  plan.relation = Relation::kSingle;
  plan.sub_events.push_back({std::move(text), 0});
  plan.provenance = PlanSource::kFallback;
  return plan;
}

std::string cache_key(std::string_view prompt, std::string_view model_name) {
  std::string material(model_name);
  material.push_back('\0');
  material.append(prompt);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(material.data(), material.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  for (unsigned int n = 0; n < length; ++n) hex += fmt::format("{:02x}", digest[n]);
  return hex;
}

QueryPlan plan_query(std::string_view query, const PlannerConfig& cfg) {
  cfg.validate();
  if (trim(query).empty()) throw InputError("empty query");
  try {
    HttpChatTransport transport(cfg);
    return plan_query(query, cfg, transport);
  } catch (const TransportError& e) {
    spdlog::warn("planner: {}; using the single-event fallback", e.what());
    return fallback_plan(query);
  }
}

QueryPlan plan_query(std::string_view query, const PlannerConfig& cfg, ChatTransport& transport) {
  cfg.validate();
  const std::string prompt = build_prompt(query);
  const auto entry = cfg.cache_dir / (cache_key(prompt, cfg.model_name) + ".json");

  if (std::filesystem::exists(entry)) {
    try {
      std::ifstream in(entry);
      const json cached = json::parse(in);
      QueryPlan plan = parse_plan(cached.at("raw").get<std::string>(), query);
      plan.provenance = PlanSource::kCache;
      return plan;
    } catch (const std::exception& e) {
      spdlog::warn("planner: ignoring unusable cache entry {}: {}", entry.string(), e.what());
    }
  }

  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    try {
      const std::string raw = transport.complete(prompt);
      QueryPlan plan = parse_plan(raw, query);
      try {
        const json record{{"model", cfg.model_name}, {"endpoint", cfg.endpoint_url},
                          {"prompt", prompt}, {"raw", raw}};
        write_file_atomic(entry, record.dump(2) + "\n");
      } catch (const std::exception& e) {
        spdlog::warn("planner: could not write cache entry {}: {}", entry.string(), e.what());
      }
      return plan;
    } catch (const TransportError& e) {
      spdlog::warn("planner: attempt {} failed: {}", attempt + 1, e.what());
    } catch (const ParseFailure& e) {
      spdlog::warn("planner: attempt {} returned an unusable plan: {}", attempt + 1, e.what());
    }
  }
  return fallback_plan(query);
}

}  // namespace tfvtg

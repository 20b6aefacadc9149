#include <cstdlib>
#include <regex>

#include <fmt/format.h>
#include "httplib.h"
#include "json.hpp"

#include "tfvtg/error.hpp"
#include "tfvtg/planner.hpp"

namespace tfvtg {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern))
    throw TransportError(fmt::format("endpoint '{}' is not an http(s) URL", url));
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

}  // namespace

HttpChatTransport::HttpChatTransport(const PlannerConfig& cfg) : cfg_(cfg) {
  if (const char* key = std::getenv(cfg_.api_key_env_var.c_str())) api_key_ = key;
}

std::string HttpChatTransport::complete(const std::string& prompt) {
  const Endpoint endpoint = split_url(cfg_.endpoint_url);
  httplib::Client client(endpoint.base);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const json body{{"model", cfg_.model_name},
                  {"temperature", 0},
                  {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
  auto res = client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!res) throw TransportError(fmt::format("POST {} failed: {}", cfg_.endpoint_url,
                                             httplib::to_string(res.error())));
  if (res->status != 200)
    throw TransportError(fmt::format("POST {} returned HTTP {}", cfg_.endpoint_url, res->status));

  const json doc = json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) throw TransportError("chat response is not JSON");
  try {
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw TransportError("chat response has no choices[0].message.content");
  }
}

}  // namespace tfvtg

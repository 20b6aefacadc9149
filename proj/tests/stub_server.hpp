#pragma once

#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace tfvtg::testing {

/// Local chat-completions endpoint that replays a script of replies and
/// counts requests. Once the script runs out the last step repeats.
class StubChatServer {
 public:
  struct Step {
    std::string content;               // text placed in choices[0].message.content
    std::chrono::milliseconds delay{0};
    int status = 200;
  };

  StubChatServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      Step step;
      {
        std::lock_guard lock(mu_);
        last_body_ = req.body;
        step = script_.empty() ? Step{} : script_.front();
        if (script_.size() > 1) script_.pop_front();
      }
      if (step.delay.count() > 0) std::this_thread::sleep_for(step.delay);
      res.status = step.status;
      nlohmann::json body{{"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", step.content}}}}}}};
      res.set_content(body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubChatServer() {
    server_.stop();
    thread_.join();
  }

  void script(std::deque<Step> steps) {
    std::lock_guard lock(mu_);
    script_ = std::move(steps);
  }

  int hits() const { return hits_.load(); }
  std::string last_body() const {
    std::lock_guard lock(mu_);
    return last_body_;
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  mutable std::mutex mu_;
  std::deque<Step> script_;
  std::string last_body_;
};

}  // namespace tfvtg::testing

#include <httplib.h>
#include <json.hpp>

#include <fmt/format.h>

#include "coevo/error.hpp"
#include "coevo/llm_bridge.hpp"

namespace coevo {

RemoteGenerator::RemoteGenerator(std::string url, std::string token, std::chrono::milliseconds timeout)
    : token_(std::move(token)), timeout_(timeout) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::ConfigInvalid, fmt::format("bad generator url '{}'", url));
  const auto slash = url.find('/', scheme + 3);
  base_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::optional<std::string> RemoteGenerator::post(const std::string& prompt, Rng& rng) {
  try {
    httplib::Client client(base_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    if (!token_.empty()) client.set_bearer_token_auth(token_);

    const nlohmann::json body = {{"prompt", prompt}, {"seed", rng()}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) {
      last_error_ = fmt::format("transport error: {}", httplib::to_string(res.error()));
      return std::nullopt;
    }
    if (res->status != 200) {
      last_error_ = fmt::format("HTTP {}", res->status);
      return std::nullopt;
    }
    const auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("text") || !reply["text"].is_string()) {
      last_error_ = "response has no text field";
      return std::nullopt;
    }
    last_error_.clear();
    return reply["text"].get<std::string>();
  } catch (const std::exception& e) {
    last_error_ = e.what();
    return std::nullopt;
  }
}

std::string RemoteGenerator::generate(const PromptBundle& prompt, Rng& rng) {
  return post(prompt.to_text(), rng).value_or("");
}

std::string RemoteGenerator::analyze(const std::string& request, Rng& rng) { return post(request, rng).value_or(""); }

std::string RemoteGenerator::refine_task(const std::string& task, Rng& rng) {
  auto reply = post(
      "Rewrite the following task description with different wording while keeping its meaning. Reply with "
      "the rewritten description only.\n\n" + task,
      rng);
  if (!reply || reply->find_first_not_of(" \t\r\n") == std::string::npos) return task;
  return *reply;
}

}  // namespace coevo

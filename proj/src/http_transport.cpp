#include "social_gym/http_transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "social_gym/error.hpp"

namespace social_gym {
namespace {

using json = nlohmann::json;

std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("base url '{}' has no scheme", base_url));
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

std::optional<std::chrono::milliseconds> retry_after(const httplib::Result& result) {
  if (!result || !result->has_header("Retry-After")) return std::nullopt;
  const auto value = result->get_header_value("Retry-After");
  char* end = nullptr;
  const double seconds = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || seconds < 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

ChatResponse parse_completion(const std::string& body) {
  try {
    const auto doc = json::parse(body);
    ChatResponse response;
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    response.text = content.is_null() ? std::string() : content.get<std::string>();
    if (doc.contains("usage") && doc["usage"].is_object()) {
      const auto& u = doc["usage"];
      response.usage = {u.value("prompt_tokens", 0), u.value("completion_tokens", 0), u.value("total_tokens", 0)};
    }
    return response;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadResponse, fmt::format("unexpected chat completion payload: {}", e.what()));
  }
}

}  // namespace

std::optional<std::string> resolve_api_key(const HttpTransportConfig& config) {
  if (const char* env = std::getenv(kApiKeyEnvVar); env != nullptr && *env != '\0') return std::string(env);
  if (config.api_key && !config.api_key->empty()) return config.api_key;
  return std::nullopt;
}

std::chrono::milliseconds backoff_delay(const HttpTransportConfig& config, int attempt) {
  const double scaled = static_cast<double>(config.initial_backoff.count()) *
                        std::pow(config.backoff_multiplier, std::max(0, attempt - 1));
  const double capped = std::min(scaled, static_cast<double>(config.max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(capped));
}

HttpChatTransport::HttpChatTransport(HttpTransportConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (config_.max_attempts < 1) throw Error(ErrorCode::InvalidConfig, "max_attempts must be >= 1");
  std::tie(scheme_host_port_, path_prefix_) = split_base_url(config_.base_url);
}

ChatResponse HttpChatTransport::complete(const ChatRequest& request) {
  check_request(request);
  const auto key = resolve_api_key(config_);
  if (!key) {
    throw Error(ErrorCode::AuthMissing, fmt::format("no API key configured; set {}", kApiKeyEnvVar));
  }

  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  client.set_bearer_token_auth(*key);

  const std::string path = path_prefix_ + "/chat/completions";
  const std::string body = to_json(request).dump();

  ErrorCode last_code = ErrorCode::TransportTimeout;
  std::string last_message;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    const auto start = std::chrono::steady_clock::now();
    auto result = client.Post(path, body, "application/json");
    const double latency =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (result && result->status >= 200 && result->status < 300) {
      auto response = parse_completion(result->body);
      response.latency_ms = latency;
      return response;
    }
    if (!result) {
      last_code = ErrorCode::TransportTimeout;
      last_message = fmt::format("request to {}{} failed: {}", scheme_host_port_, path, httplib::to_string(result.error()));
    } else if (result->status == 429) {
      last_code = ErrorCode::RateLimited;
      last_message = fmt::format("rate limited by {} (HTTP 429)", scheme_host_port_);
    } else if (result->status >= 500) {
      last_code = ErrorCode::HttpError;
      last_message = fmt::format("server error HTTP {}: {}", result->status, result->body.substr(0, 200));
    } else {
      // 4xx other than 429 will not improve on retry
      throw Error(ErrorCode::HttpError, fmt::format("HTTP {}: {}", result->status, result->body.substr(0, 200)));
    }
    if (attempt == config_.max_attempts) break;
    auto delay = backoff_delay(config_, attempt);
    if (auto hint = retry_after(result)) delay = std::min(*hint, config_.max_backoff);
    sleeper_(delay);
  }
  throw Error(last_code, fmt::format("{} (after {} attempts)", last_message, config_.max_attempts));
}

}  // namespace social_gym

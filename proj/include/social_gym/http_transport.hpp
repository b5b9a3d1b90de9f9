#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "social_gym/transport.hpp"

namespace social_gym {

inline constexpr const char* kApiKeyEnvVar = "SOCIAL_GYM_API_KEY";

struct HttpTransportConfig {
  // Scheme, host, optional port and path prefix; requests go to
  // <base_url>/chat/completions.
  std::string base_url = "https://api.openai.com/v1";
  std::optional<std::string> api_key;
  std::chrono::milliseconds timeout{120'000};
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{1'000};
  double backoff_multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30'000};
};

// SOCIAL_GYM_API_KEY wins over the configured key.
std::optional<std::string> resolve_api_key(const HttpTransportConfig& config);

// Backoff before retry number `attempt` (1-based), ignoring Retry-After.
std::chrono::milliseconds backoff_delay(const HttpTransportConfig& config, int attempt);

// Chat-completions client. Retries connection failures, HTTP 429 and 5xx with
// exponential backoff up to max_attempts, then raises TRANSPORT_TIMEOUT,
// RATE_LIMITED or HTTP_ERROR respectively.
class HttpChatTransport final : public ChatTransport {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpChatTransport(HttpTransportConfig config, Sleeper sleeper = {});

  ChatResponse complete(const ChatRequest& request) override;

 private:
  HttpTransportConfig config_;
  Sleeper sleeper_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace social_gym

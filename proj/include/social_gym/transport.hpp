#pragma once

#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace social_gym {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role) noexcept;
Role role_from_string(std::string_view text);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

inline constexpr double kDefaultTemperature = 0.3;
inline constexpr int kDefaultMaxTokens = 5000;

struct ChatRequest {
  std::string model_name;
  std::vector<ChatMessage> messages;
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;

  bool operator==(const ChatRequest&) const = default;
};

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int total_tokens = 0;
};

struct ChatResponse {
  std::string text;
  double latency_ms = 0.0;
  TokenUsage usage;
};

// Throws Error(InvalidRequest) if messages are empty, temperature is outside
// [0, 2], max_tokens < 1, or a SYSTEM message appears anywhere but first.
void check_request(const ChatRequest& request);

nlohmann::json to_json(const ChatRequest& request);
ChatRequest request_from_json(const nlohmann::json& document);

// Compact JSON with sorted keys; independent of the field order of whatever
// document the request was read from.
std::string canonicalize(const ChatRequest& request);
std::string canonicalize_and_hash(const ChatRequest& request);

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

inline std::string complete_text(ChatTransport& transport, const ChatRequest& request) {
  return transport.complete(request).text;
}

// Refuses every call. Backs REPLAY cassettes so a miss can never fall
// through to the network.
class ForbidLiveTransport final : public ChatTransport {
 public:
  ChatResponse complete(const ChatRequest& request) override;
  int attempted_calls() const noexcept { return attempts_.load(); }

 private:
  std::atomic<int> attempts_{0};
};

// Answers with a fixed queue of texts, in order; the last one repeats once the
// queue is drained. Captures every request it sees.
class QueueTransport final : public ChatTransport {
 public:
  explicit QueueTransport(std::vector<std::string> responses);
  ChatResponse complete(const ChatRequest& request) override;

  const std::vector<ChatRequest>& requests() const noexcept { return requests_; }

 private:
  std::mutex mutex_;
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
  std::vector<ChatRequest> requests_;
};

struct ChatExchange {
  std::string request_hash;
  ChatRequest request;
  ChatResponse response;
};

nlohmann::ordered_json to_json(const ChatExchange& exchange);
ChatExchange exchange_from_json(const nlohmann::json& document);

enum class CassetteMode { Record, Replay, Passthrough };

std::string_view to_string(CassetteMode mode) noexcept;
CassetteMode cassette_mode_from_string(std::string_view text);

// Record/replay layer. Cassette files hold one ChatExchange JSON object per
// line. RECORD appends every exchange as it happens; REPLAY serves recorded
// responses by request hash (in recorded order for repeated hashes) and
// raises REPLAY_MISS on anything unrecorded. Thread-safe.
class CassetteTransport final : public ChatTransport {
 public:
  CassetteTransport(CassetteMode mode, std::filesystem::path path, std::shared_ptr<ChatTransport> inner);

  ChatResponse complete(const ChatRequest& request) override;

  CassetteMode mode() const noexcept { return mode_; }
  std::size_t exchange_count() const;
  int replay_misses() const noexcept { return misses_.load(); }

  static std::vector<ChatExchange> load(const std::filesystem::path& path);

 private:
  struct Recorded {
    std::vector<ChatResponse> responses;
    std::size_t cursor = 0;
  };

  CassetteMode mode_;
  std::filesystem::path path_;
  std::shared_ptr<ChatTransport> inner_;
  mutable std::mutex mutex_;
  std::map<std::string, Recorded> replay_;
  std::ofstream sink_;
  std::size_t recorded_ = 0;
  std::atomic<int> misses_{0};
};

}  // namespace social_gym

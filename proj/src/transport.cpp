#include "social_gym/transport.hpp"

#include <chrono>
#include <sstream>

#include <fmt/format.h>

#include "social_gym/error.hpp"
#include "social_gym/hashing.hpp"

namespace social_gym {

using json = nlohmann::json;

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

Role role_from_string(std::string_view text) {
  if (text == "system") return Role::System;
  if (text == "user") return Role::User;
  if (text == "assistant") return Role::Assistant;
  throw Error(ErrorCode::InvalidRequest, fmt::format("unknown message role '{}'", text));
}

void check_request(const ChatRequest& request) {
  if (request.messages.empty()) throw Error(ErrorCode::InvalidRequest, "chat request has no messages");
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
    throw Error(ErrorCode::InvalidRequest, fmt::format("temperature {} outside [0, 2]", request.temperature));
  }
  if (request.max_tokens < 1) throw Error(ErrorCode::InvalidRequest, "max_tokens must be positive");
  for (std::size_t i = 1; i < request.messages.size(); ++i) {
    if (request.messages[i].role == Role::System) {
      throw Error(ErrorCode::InvalidRequest, "only the first message may be a system message");
    }
  }
}

json to_json(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  return {{"model", request.model_name},
          {"messages", std::move(messages)},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}};
}

ChatRequest request_from_json(const json& document) {
  try {
    ChatRequest request;
    request.model_name = document.at("model").get<std::string>();
    for (const auto& m : document.at("messages")) {
      request.messages.push_back({role_from_string(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
    }
    if (document.contains("temperature")) request.temperature = document["temperature"].get<double>();
    if (document.contains("max_tokens")) request.max_tokens = document["max_tokens"].get<int>();
    return request;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidRequest, fmt::format("malformed chat request: {}", e.what()));
  }
}

std::string canonicalize(const ChatRequest& request) {
  // nlohmann::json objects are key-sorted, and dump() without indent is
  // whitespace-free, so this is canonical by construction.
  return to_json(request).dump();
}

std::string canonicalize_and_hash(const ChatRequest& request) { return sha256_hex(canonicalize(request)); }

ChatResponse ForbidLiveTransport::complete(const ChatRequest&) {
  ++attempts_;
  throw Error(ErrorCode::LiveCallForbidden, "live chat call attempted while running offline");
}

QueueTransport::QueueTransport(std::vector<std::string> responses) : responses_(std::move(responses)) {}

ChatResponse QueueTransport::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  if (responses_.empty()) return {};
  const auto& text = responses_[std::min(next_, responses_.size() - 1)];
  ++next_;
  return ChatResponse{text, 0.0, {}};
}

nlohmann::ordered_json to_json(const ChatExchange& exchange) {
  nlohmann::ordered_json doc;
  doc["request_hash"] = exchange.request_hash;
  doc["request"] = to_json(exchange.request);
  doc["response"] = exchange.response.text;
  doc["latency_ms"] = exchange.response.latency_ms;
  doc["usage"] = {{"prompt_tokens", exchange.response.usage.prompt_tokens},
                  {"completion_tokens", exchange.response.usage.completion_tokens},
                  {"total_tokens", exchange.response.usage.total_tokens}};
  return doc;
}

ChatExchange exchange_from_json(const json& document) {
  try {
    ChatExchange exchange;
    exchange.request = request_from_json(document.at("request"));
    exchange.request_hash = document.value("request_hash", canonicalize_and_hash(exchange.request));
    exchange.response.text = document.at("response").get<std::string>();
    exchange.response.latency_ms = document.value("latency_ms", 0.0);
    if (document.contains("usage")) {
      const auto& u = document["usage"];
      exchange.response.usage = {u.value("prompt_tokens", 0), u.value("completion_tokens", 0), u.value("total_tokens", 0)};
    }
    return exchange;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailed, fmt::format("malformed cassette entry: {}", e.what()));
  }
}

std::string_view to_string(CassetteMode mode) noexcept {
  switch (mode) {
    case CassetteMode::Record: return "record";
    case CassetteMode::Replay: return "replay";
    case CassetteMode::Passthrough: return "passthrough";
  }
  return "passthrough";
}

CassetteMode cassette_mode_from_string(std::string_view text) {
  if (text == "record") return CassetteMode::Record;
  if (text == "replay") return CassetteMode::Replay;
  if (text == "passthrough" || text == "live") return CassetteMode::Passthrough;
  throw Error(ErrorCode::InvalidConfig, fmt::format("unknown transport mode '{}'", text));
}

std::vector<ChatExchange> CassetteTransport::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read cassette " + path.string());
  std::vector<ChatExchange> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseFailed, fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
    out.push_back(exchange_from_json(doc));
  }
  return out;
}

CassetteTransport::CassetteTransport(CassetteMode mode, std::filesystem::path path,
                                     std::shared_ptr<ChatTransport> inner)
    : mode_(mode), path_(std::move(path)), inner_(std::move(inner)) {
  if (mode_ == CassetteMode::Replay) {
    for (auto& exchange : load(path_)) {
      // Trust the request, not the stored hash field.
      replay_[canonicalize_and_hash(exchange.request)].responses.push_back(std::move(exchange.response));
      ++recorded_;
    }
    return;
  }
  if (!inner_) throw Error(ErrorCode::InvalidConfig, "record/passthrough transport needs a backend");
  if (mode_ == CassetteMode::Record) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    sink_.open(path_, std::ios::binary | std::ios::app);
    if (!sink_) throw Error(ErrorCode::Io, "cannot open cassette for writing: " + path_.string());
  }
}

ChatResponse CassetteTransport::complete(const ChatRequest& request) {
  check_request(request);
  const auto hash = canonicalize_and_hash(request);
  if (mode_ == CassetteMode::Replay) {
    std::lock_guard lock(mutex_);
    auto it = replay_.find(hash);
    if (it == replay_.end()) {
      ++misses_;
      throw Error(ErrorCode::ReplayMiss, fmt::format("no recorded exchange for request {}", hash.substr(0, 16)));
    }
    auto& recorded = it->second;
    const auto& response = recorded.responses[std::min(recorded.cursor, recorded.responses.size() - 1)];
    ++recorded.cursor;
    return response;
  }

  const auto start = std::chrono::steady_clock::now();
  ChatResponse response = inner_->complete(request);
  if (response.latency_ms == 0.0) {
    response.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  if (mode_ == CassetteMode::Record) {
    std::lock_guard lock(mutex_);
    sink_ << to_json(ChatExchange{hash, request, response}).dump() << '\n';
    sink_.flush();
    if (!sink_) throw Error(ErrorCode::Io, "cassette write failed: " + path_.string());
    ++recorded_;
  }
  return response;
}

std::size_t CassetteTransport::exchange_count() const {
  std::lock_guard lock(mutex_);
  return recorded_;
}

}  // namespace social_gym

#include <fstream>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "social_gym/hashing.hpp"
#include "social_gym/transport.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

using testing::TempDir;

ChatRequest sample_request(const std::string& text = "hello") {
  return ChatRequest{"gpt-4o", {{Role::System, "sys"}, {Role::User, text}}, 0.3, 100};
}

TEST(Request, Validation) {
  EXPECT_NO_THROW(check_request(sample_request()));
  ChatRequest empty{"m", {}, 0.3, 10};
  EXPECT_ERROR_CODE(check_request(empty), ErrorCode::InvalidRequest);
  auto hot = sample_request();
  hot.temperature = 2.5;
  EXPECT_ERROR_CODE(check_request(hot), ErrorCode::InvalidRequest);
  auto no_tokens = sample_request();
  no_tokens.max_tokens = 0;
  EXPECT_ERROR_CODE(check_request(no_tokens), ErrorCode::InvalidRequest);
  auto late_system = sample_request();
  late_system.messages.push_back({Role::System, "again"});
  EXPECT_ERROR_CODE(check_request(late_system), ErrorCode::InvalidRequest);
}

TEST(Request, JsonRoundTrip) {
  const auto r = sample_request();
  EXPECT_EQ(request_from_json(to_json(r)), r);
  EXPECT_ERROR_CODE(request_from_json(nlohmann::json::object()), ErrorCode::InvalidRequest);
  EXPECT_ERROR_CODE(role_from_string("tool"), ErrorCode::InvalidRequest);
}

TEST(Hash, IndependentOfFieldOrder) {
  const auto a = nlohmann::json::parse(
      R"({"model":"gpt-4o","messages":[{"role":"user","content":"x"}],"temperature":0.3,"max_tokens":9})");
  const auto b = nlohmann::json::parse(
      R"({"max_tokens":9,"temperature":0.3,"messages":[{"content":"x","role":"user"}],"model":"gpt-4o"})");
  EXPECT_EQ(canonicalize_and_hash(request_from_json(a)), canonicalize_and_hash(request_from_json(b)));
  EXPECT_EQ(canonicalize(request_from_json(a)), canonicalize(request_from_json(b)));
}

TEST(Hash, SensitiveToEveryField) {
  const auto base = canonicalize_and_hash(sample_request());
  auto r = sample_request();
  r.model_name = "other";
  EXPECT_NE(canonicalize_and_hash(r), base);
  r = sample_request();
  r.temperature = 0.31;
  EXPECT_NE(canonicalize_and_hash(r), base);
  r = sample_request();
  r.max_tokens = 101;
  EXPECT_NE(canonicalize_and_hash(r), base);
  r = sample_request();
  r.messages[1].role = Role::Assistant;
  EXPECT_NE(canonicalize_and_hash(r), base);
  r = sample_request();
  r.messages[1].content += " ";
  EXPECT_NE(canonicalize_and_hash(r), base);
}

TEST(Hash, NoCollisionsOnNearbyRequests) {
  std::set<std::string> hashes;
  for (int i = 0; i < 5000; ++i) hashes.insert(canonicalize_and_hash(sample_request("q" + std::to_string(i))));
  EXPECT_EQ(hashes.size(), 5000u);
}

TEST(Cassette, RecordThenReplay) {
  TempDir dir;
  const auto path = dir / "c.jsonl";
  auto backend = std::make_shared<QueueTransport>(std::vector<std::string>{"one", "two", "three"});
  {
    CassetteTransport rec(CassetteMode::Record, path, backend);
    EXPECT_EQ(rec.complete(sample_request("a")).text, "one");
    EXPECT_EQ(rec.complete(sample_request("b")).text, "two");
    EXPECT_EQ(rec.complete(sample_request("a")).text, "three");
    EXPECT_EQ(rec.exchange_count(), 3u);
  }
  EXPECT_EQ(CassetteTransport::load(path).size(), 3u);

  auto guard = std::make_shared<ForbidLiveTransport>();
  CassetteTransport replay(CassetteMode::Replay, path, guard);
  EXPECT_EQ(replay.complete(sample_request("a")).text, "one");
  EXPECT_EQ(replay.complete(sample_request("b")).text, "two");
  EXPECT_EQ(replay.complete(sample_request("a")).text, "three");
  EXPECT_EQ(replay.complete(sample_request("a")).text, "three");
  EXPECT_ERROR_CODE(replay.complete(sample_request("c")), ErrorCode::ReplayMiss);
  EXPECT_EQ(replay.replay_misses(), 1);
  EXPECT_EQ(guard->attempted_calls(), 0);
  EXPECT_EQ(backend->requests().size(), 3u);
}

TEST(Cassette, RecordAppends) {
  TempDir dir;
  const auto path = dir / "c.jsonl";
  auto backend = std::make_shared<QueueTransport>(std::vector<std::string>{"x"});
  CassetteTransport(CassetteMode::Record, path, backend).complete(sample_request("a"));
  CassetteTransport(CassetteMode::Record, path, backend).complete(sample_request("b"));
  EXPECT_EQ(CassetteTransport::load(path).size(), 2u);
}

TEST(Cassette, PassthroughWritesNothing) {
  TempDir dir;
  auto backend = std::make_shared<QueueTransport>(std::vector<std::string>{"x"});
  CassetteTransport live(CassetteMode::Passthrough, dir / "c.jsonl", backend);
  EXPECT_EQ(live.complete(sample_request()).text, "x");
  EXPECT_FALSE(std::filesystem::exists(dir / "c.jsonl"));
}

TEST(Cassette, ReplayRehashesRequestsIgnoringStoredHash) {
  TempDir dir;
  ChatExchange ex{"bogus", sample_request("a"), {"stored", 1.0, {}}};
  std::ofstream(dir / "c.jsonl") << to_json(ex).dump() << "\n\n";
  CassetteTransport replay(CassetteMode::Replay, dir / "c.jsonl", nullptr);
  EXPECT_EQ(replay.complete(sample_request("a")).text, "stored");
}

TEST(Cassette, Errors) {
  TempDir dir;
  EXPECT_ERROR_CODE(CassetteTransport(CassetteMode::Replay, dir / "none.jsonl", nullptr), ErrorCode::Io);
  std::ofstream(dir / "bad.jsonl") << "{not json\n";
  EXPECT_ERROR_CODE(CassetteTransport(CassetteMode::Replay, dir / "bad.jsonl", nullptr), ErrorCode::ParseFailed);
  EXPECT_ERROR_CODE(CassetteTransport(CassetteMode::Record, dir / "r.jsonl", nullptr), ErrorCode::InvalidConfig);
  EXPECT_ERROR_CODE(cassette_mode_from_string("tape"), ErrorCode::InvalidConfig);
  EXPECT_EQ(cassette_mode_from_string("live"), CassetteMode::Passthrough);
}

TEST(Cassette, ConcurrentRecordingKeepsEveryLine) {
  TempDir dir;
  auto backend = std::make_shared<QueueTransport>(std::vector<std::string>{"x"});
  {
    CassetteTransport rec(CassetteMode::Record, dir / "c.jsonl", backend);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 50; ++i) rec.complete(sample_request(std::to_string(t) + ":" + std::to_string(i)));
      });
    }
    for (auto& th : threads) th.join();
  }
  EXPECT_EQ(CassetteTransport::load(dir / "c.jsonl").size(), 200u);
}

TEST(Forbid, CountsAttempts) {
  ForbidLiveTransport guard;
  EXPECT_ERROR_CODE(guard.complete(sample_request()), ErrorCode::LiveCallForbidden);
  EXPECT_EQ(guard.attempted_calls(), 1);
}

}  // namespace
}  // namespace social_gym

#include <gtest/gtest.h>

#include "social_gym/pedagogy.hpp"
#include "social_gym/random.hpp"
#include "social_gym/scripted.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

using testing::TempDir;
using testing::zorblax;

class EchoAgent : public SessionAgent {
 public:
  explicit EchoAgent(std::string name) : name_(std::move(name)) {}
  std::string speak(StrategyId, std::span<const DialogueTurn> history, const TurnRequest& request) override {
    ++calls;
    if (fail_at && *fail_at == static_cast<int>(history.size())) throw Error(ErrorCode::TransportTimeout, "down");
    return name_ + " " + std::string(to_string(request.kind)) + " " + std::to_string(request.round);
  }
  int calls = 0;
  std::optional<int> fail_at;

 private:
  std::string name_;
};

int count(const Transcript& t, Speaker s, std::optional<TurnKind> kind = std::nullopt) {
  int n = 0;
  for (const auto& turn : t.turns) {
    if (turn.speaker == s && (!kind || turn.kind == *kind)) ++n;
  }
  return n;
}

TEST(Strategy, LabelsRoundTrip) {
  for (auto id : kAllStrategies) EXPECT_EQ(parse_strategy(label(id)), id);
  EXPECT_ERROR_CODE(parse_strategy("Dial-XX"), ErrorCode::UnknownStrategy);
  EXPECT_EQ(framing(StrategyId::DialBuTq), Framing::BottomUp);
  EXPECT_EQ(initiative(StrategyId::DialBuTq), Initiative::TeacherQ);
  EXPECT_FALSE(is_dialogic(StrategyId::TD));
  EXPECT_TRUE(is_dialogic(StrategyId::LQ));
}

TEST(Session, DialogicShape) {
  const auto& o = *zorblax();
  for (auto id : kAllStrategies) {
    EchoAgent teacher("T");
    EchoAgent learner("L");
    const auto t = run_session(id, o, teacher, learner, {});
    EXPECT_TRUE(validate_transcript(t, {is_dialogic(id) ? 20 : 10, true}).empty()) << label(id);
    if (is_dialogic(id)) {
      EXPECT_EQ(count(t, Speaker::Teacher), 10);
      EXPECT_EQ(count(t, Speaker::Learner) - count(t, Speaker::Learner, TurnKind::Summary), 10);
      EXPECT_EQ(count(t, Speaker::Learner, TurnKind::Summary), 10);
    } else {
      EXPECT_EQ(count(t, Speaker::Teacher, TurnKind::Exposition), 10);
      EXPECT_EQ(count(t, Speaker::Learner, TurnKind::Summary), 10);
    }
    EXPECT_EQ(t.ontology_fingerprint, fingerprint(o));
  }
}

TEST(Session, InitiativeOrder) {
  EchoAgent teacher("T");
  EchoAgent learner("L");
  const auto lq = run_session(StrategyId::DialLq, *zorblax(), teacher, learner, {});
  EXPECT_EQ(lq.turns[0].speaker, Speaker::Learner);
  EXPECT_EQ(lq.turns[0].kind, TurnKind::Question);
  EXPECT_EQ(lq.turns[1].kind, TurnKind::Answer);
  EXPECT_EQ(lq.turns[2].kind, TurnKind::Summary);
  const auto tq = run_session(StrategyId::TQ, *zorblax(), teacher, learner, {});
  EXPECT_EQ(tq.turns[0].speaker, Speaker::Teacher);
  EXPECT_EQ(tq.turns[0].kind, TurnKind::Question);
  EXPECT_EQ(tq.turns[1].kind, TurnKind::Summary);
  EXPECT_EQ(tq.turns[2].kind, TurnKind::Answer);
}

TEST(Session, NoSummariesWhenDisabled) {
  SessionConfig config;
  config.summary_after_teacher_turn = false;
  EchoAgent teacher("T");
  EchoAgent learner("L");
  const auto t = run_session(StrategyId::DialTdLq, *zorblax(), teacher, learner, config);
  EXPECT_EQ(t.turns.size(), 20u);
  EXPECT_TRUE(validate_transcript(t, {20, false}).empty());
  EXPECT_FALSE(validate_transcript(t, {20, true}).empty());
}

TEST(Session, ConfigChecks) {
  SessionConfig odd;
  odd.total_turns = 7;
  EXPECT_ERROR_CODE(check_session_config(odd), ErrorCode::InvalidConfig);
  SessionConfig zero;
  zero.monologic_segments = 0;
  EXPECT_ERROR_CODE(check_session_config(zero), ErrorCode::InvalidConfig);
}

TEST(Session, AbortAndResume) {
  const auto& o = *zorblax();
  EchoAgent teacher("T");
  EchoAgent learner("L");
  learner.fail_at = 11;
  std::optional<Transcript> partial;
  try {
    run_session(StrategyId::DialBuLq, o, teacher, learner, {});
    FAIL() << "expected abort";
  } catch (const SessionAborted& e) {
    EXPECT_EQ(e.code(), ErrorCode::TransportTimeout);
    partial = e.partial();
  }
  ASSERT_EQ(partial->turns.size(), 11u);
  learner.fail_at.reset();
  const int teacher_calls = teacher.calls;
  const auto resumed = run_session(StrategyId::DialBuLq, o, teacher, learner, {}, partial);
  EchoAgent t2("T");
  EchoAgent l2("L");
  EXPECT_EQ(resumed, run_session(StrategyId::DialBuLq, o, t2, l2, {}));
  EXPECT_EQ(teacher.calls - teacher_calls, 10 - 4);

  auto wrong = *partial;
  wrong.strategy_label = "TD";
  EXPECT_ERROR_CODE(run_session(StrategyId::DialBuLq, o, teacher, learner, {}, wrong), ErrorCode::InvalidTranscript);
}

// Structural corruption of a single turn.
Transcript corrupt(Transcript t, Rng& rng) {
  const auto i = rng.index(t.turns.size());
  switch (rng.below(5)) {
    case 0:
      t.turns[i].speaker = t.turns[i].speaker == Speaker::Teacher ? Speaker::Learner : Speaker::Teacher;
      break;
    case 1: {
      const TurnKind kinds[] = {TurnKind::Exposition, TurnKind::Question, TurnKind::Answer, TurnKind::Summary};
      auto k = kinds[rng.index(4)];
      while (k == t.turns[i].kind) k = kinds[rng.index(4)];
      t.turns[i].kind = k;
      break;
    }
    case 2: t.turns[i].index += 1 + static_cast<int>(rng.below(5)); break;
    case 3: t.turns.erase(t.turns.begin() + static_cast<std::ptrdiff_t>(i)); break;
    default: t.turns.insert(t.turns.begin() + static_cast<std::ptrdiff_t>(i), t.turns[i]); break;
  }
  return t;
}

TEST(Transcript, SingleTurnCorruptionsAreRejected) {
  Rng rng(2718);
  for (auto id : kAllStrategies) {
    EchoAgent teacher("T");
    EchoAgent learner("L");
    const auto clean = run_session(id, *zorblax(), teacher, learner, {});
    const TranscriptExpectations expect{is_dialogic(id) ? 20 : 10, true};
    ASSERT_TRUE(validate_transcript(clean, expect).empty());
    for (int k = 0; k < 100; ++k) {
      const auto bad = corrupt(clean, rng);
      EXPECT_FALSE(validate_transcript(bad, expect).empty()) << label(id) << " corruption " << k;
    }
  }
}

TEST(Transcript, JsonRoundTrip) {
  EchoAgent teacher("T");
  EchoAgent learner("L");
  const auto t = run_session(StrategyId::DialTq, *zorblax(), teacher, learner, {});
  EXPECT_EQ(transcript_from_json(to_json(t)), t);
  TempDir dir;
  save_transcript(dir / "t.json", t);
  EXPECT_EQ(load_transcript(dir / "t.json"), t);
  EXPECT_ERROR_CODE(transcript_from_json(nlohmann::json::object()), ErrorCode::ParseFailed);
}

TEST(Transcript, LearnerContext) {
  Transcript t{"TD", {{0, Speaker::Teacher, TurnKind::Exposition, "Zorblax's Diet is Mineralvore."},
                      {1, Speaker::Learner, TurnKind::Summary, "Noted."}}, ""};
  EXPECT_EQ(transcript_to_learner_context(t), std::string(kLessonHeader) +
                                                  "\nTeacher: Zorblax's Diet is Mineralvore.\nLearner: Noted.");
}

TEST(Prompts, TeacherSeesOntologyLearnerDoesNot) {
  const auto& o = *zorblax();
  for (auto id : kAllStrategies) {
    const auto teacher = build_teacher_system_prompt(id, o);
    const auto learner = build_learner_training_prompt(id);
    for (const auto& sp : o.species) {
      EXPECT_NE(teacher.find(sp.name), std::string::npos);
      EXPECT_EQ(learner.find(sp.name), std::string::npos);
    }
  }
  EXPECT_NE(build_teacher_system_prompt(StrategyId::TD, o), build_teacher_system_prompt(StrategyId::BU, o));
  EXPECT_NE(build_teacher_system_prompt(StrategyId::LQ, o), build_teacher_system_prompt(StrategyId::DialLq, o));
  EXPECT_NE(build_teacher_system_prompt(StrategyId::TQ, o), build_teacher_system_prompt(StrategyId::DialTq, o));
}

TEST(Prompts, LlmAgentRequestMapsRoles) {
  auto model = std::make_shared<QueueTransport>(std::vector<std::string>{"ok"});
  LlmSessionAgent teacher(Speaker::Teacher, "SYS", model, {});
  const std::vector<DialogueTurn> history = {{0, Speaker::Learner, TurnKind::Question, "What eats rocks?"}};
  const auto request = teacher.build_request(history, {TurnKind::Answer, 1, 10});
  ASSERT_GE(request.messages.size(), 2u);
  EXPECT_EQ(request.messages[0].role, Role::System);
  EXPECT_EQ(request.messages[0].content, "SYS");
  bool saw_question = false;
  for (const auto& m : request.messages) {
    if (m.content.find("What eats rocks?") != std::string::npos) {
      saw_question = true;
      EXPECT_EQ(m.role, Role::User);
    }
  }
  EXPECT_TRUE(saw_question);
  EXPECT_EQ(teacher.speak(StrategyId::DialLq, history, {TurnKind::Answer, 1, 10}), "ok");
  check_request(model->requests().front());
}

TEST(Session, ScriptedAgentsProduceValidTranscripts) {
  const auto& o = *zorblax();
  for (auto id : kAllStrategies) {
    auto session = make_scripted_session(id, o);
    const auto t = run_session(id, o, *session.teacher, *session.learner, {});
    EXPECT_TRUE(validate_transcript(t, {is_dialogic(id) ? 20 : 10, true}).empty()) << label(id);
    for (const auto& turn : t.turns) EXPECT_FALSE(turn.content.empty());
  }
}

}  // namespace
}  // namespace social_gym

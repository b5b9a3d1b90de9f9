#include <algorithm>
#include <bit>
#include <map>

#include <gtest/gtest.h>

#include "social_gym/agents.hpp"
#include "social_gym/hashing.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

using testing::zorblax;

// 8 species, 3 binary dimensions: every vector of the cube appears once.
std::shared_ptr<const Ontology> balanced_code() {
  Ontology o;
  o.dimensions = {{"Bit A", {"Off", "On"}}, {"Bit B", {"Off", "On"}}, {"Bit C", {"Off", "On"}}};
  for (int i = 0; i < 8; ++i) {
    Species sp{"Code" + std::to_string(i), {}};
    sp.features["Bit A"] = (i & 1) ? "On" : "Off";
    sp.features["Bit B"] = (i & 2) ? "On" : "Off";
    sp.features["Bit C"] = (i & 4) ? "On" : "Off";
    o.species.push_back(sp);
  }
  return std::make_shared<const Ontology>(o);
}

// Worst-case questions needed to identify the target among `cands`, playing
// optimally (guessing is free once one candidate is left).
class MinimaxSolver {
 public:
  MinimaxSolver(const Ontology& o, std::vector<std::string> cands) : cands_(std::move(cands)) {
    for (const auto& dim : o.dimensions) {
      for (const auto& v : dim.values) {
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < cands_.size(); ++i) {
          if (o.find_species(cands_[i])->features.at(dim.name) == v) mask |= 1u << i;
        }
        splits_.push_back(mask);
      }
    }
  }

  int solve() { return value((1u << cands_.size()) - 1); }

 private:
  int value(std::uint32_t mask) {
    if (std::popcount(mask) <= 1) return 0;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    int best = 1 << 20;
    for (auto split : splits_) {
      const auto yes = mask & split;
      const auto no = mask & ~split;
      if (yes == 0 || no == 0) continue;
      best = std::min(best, 1 + std::max(value(yes), value(no)));
    }
    memo_[mask] = best;
    return best;
  }

  std::vector<std::string> cands_;
  std::vector<std::uint32_t> splits_;
  std::map<std::uint32_t, int> memo_;
};

TEST(Halving, BalancedCodeTakesExactlyThree) {
  const auto o = balanced_code();
  std::vector<std::string> all;
  for (const auto& sp : o->species) all.push_back(sp.name);
  EXPECT_EQ(MinimaxSolver(*o, all).solve(), 3);
  for (const auto& target : all) {
    TrialState t(o, all, target);
    const auto rec = run_halving_learner(t);
    EXPECT_TRUE(rec.correct);
    EXPECT_EQ(rec.question_count, 3) << target;
  }
}

TEST(Halving, CorrectWithinSevenAndNoWorseThanNeeded) {
  const auto o = zorblax();
  const auto sets = sample_candidate_sets(*o, 200, 8, 17);
  for (const auto& s : sets) {
    int worst = 0;
    for (const auto& target : s.candidates) {
      TrialState t(o, s.candidates, target);
      const auto rec = run_halving_learner(t);
      ASSERT_TRUE(rec.correct);
      worst = std::max(worst, rec.question_count);
    }
    EXPECT_LE(worst, 7);
    EXPECT_GE(worst, MinimaxSolver(*o, s.candidates).solve());
  }
}

TEST(Halving, ChooseMinimisesLargerSide) {
  const auto& o = *zorblax();
  const std::vector<std::string> cands = {"Zorblax", "Quexil", "Vorthan", "Plimbo"};
  const auto chosen = halving_choose(cands, o);
  std::size_t chosen_worst = 0;
  std::size_t best_worst = cands.size();
  for (const auto& p : informative_predicates(cands, o)) {
    std::size_t yes = 0;
    for (const auto& c : cands) yes += oracle_answer(o, c, p) == Answer::Yes;
    const auto worst = std::max(yes, cands.size() - yes);
    best_worst = std::min(best_worst, worst);
    if (p == chosen) chosen_worst = worst;
  }
  EXPECT_EQ(chosen_worst, best_worst);
  EXPECT_ERROR_CODE(halving_choose(std::vector<std::string>{"Zorblax"}, o), ErrorCode::NoInformativePredicate);
}

TEST(Halving, InformativePredicatesSplitBothWays) {
  const auto& o = *zorblax();
  const std::vector<std::string> cands = {"Zorblax", "Quexil", "Vorthan"};
  for (const auto& p : informative_predicates(cands, o)) {
    int yes = 0;
    for (const auto& c : cands) yes += oracle_answer(o, c, p) == Answer::Yes;
    EXPECT_GT(yes, 0);
    EXPECT_LT(yes, 3);
  }
}

TEST(RandomLearner, AlwaysCorrectAndDeterministic) {
  const auto o = zorblax();
  const auto sets = sample_candidate_sets(*o, 200, 8, 3);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    TrialState a(o, sets[i].candidates, sets[i].target);
    TrialState b(o, sets[i].candidates, sets[i].target);
    const auto ra = run_random_learner(a, i);
    const auto rb = run_random_learner(b, i);
    EXPECT_TRUE(ra.correct);
    EXPECT_EQ(ra, rb);
  }
}

TEST(RandomLearner, PairedAgainstHalving) {
  const auto o = zorblax();
  const auto sets = sample_candidate_sets(*o, 1000, 8, 12345);
  long halving = 0;
  long random = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    TrialState h(o, sets[i].candidates, sets[i].target);
    TrialState r(o, sets[i].candidates, sets[i].target);
    halving += run_halving_learner(h).question_count;
    random += run_random_learner(r, derive_seed(9, std::to_string(i))).question_count;
  }
  EXPECT_LT(halving, random);
}

TEST(LearnerView, HidesTarget) {
  TrialState t(zorblax(), {"Zorblax", "Quexil"}, "Quexil");
  const auto view = make_learner_view(t, "context", false);
  EXPECT_EQ(view.candidate_names, t.candidates());
  EXPECT_FALSE(view.candidates_disclosed);
  EXPECT_EQ(view.budget_remaining, 20);
  const auto request = build_learner_turn_request(view, {});
  for (const auto& m : request.messages) {
    EXPECT_EQ(m.content.find("Quexil"), std::string::npos) << m.content;
  }
}

TEST(Descriptor, LlmNeedsModel) {
  AgentDescriptor d{AgentRole::Learner, AgentKind::Llm, std::nullopt, ""};
  EXPECT_ERROR_CODE(check_descriptor(d), ErrorCode::InvalidConfig);
  d.model_name = "gpt-4o";
  EXPECT_NO_THROW(check_descriptor(d));
  AgentDescriptor oracle{AgentRole::Oracle, AgentKind::Llm, "gpt-4o", ""};
  EXPECT_ERROR_CODE(check_descriptor(oracle), ErrorCode::InvalidConfig);
}

TEST(LlmLearner, ParsesQuestionThenGuess) {
  const auto o = zorblax();
  TrialState t(o, {"Zorblax", "Quexil"}, "Zorblax", 20, {"EXPERT", 0, 1});
  QueueTransport model({"QUESTION: Diet = Mineralvore?", "GUESS: Zorblax"});
  const auto result = run_llm_learner(t, model, "ctx", {});
  EXPECT_TRUE(result.record.correct);
  EXPECT_EQ(result.record.question_count, 1);
  EXPECT_TRUE(result.events.empty());
  ASSERT_EQ(model.requests().size(), 2u);
  const auto& second = model.requests()[1].messages.back().content;
  EXPECT_NE(second.find("1. Diet = Mineralvore? -> YES"), std::string::npos) << second;
}

TEST(LlmLearner, RepromptsThenForcesQuestion) {
  const auto o = zorblax();
  const LearnerView view{{"Zorblax", "Quexil"}, true, {}, 20, "ctx"};
  QueueTransport model({"I am thinking.", "Hmm."});
  Rng rng(1);
  const auto informative = informative_predicates(view.candidate_names, *o);
  const auto turn = llm_learner_turn(view, model, *o, {}, {informative, view.candidate_names, &rng});
  ASSERT_EQ(turn.events.size(), 3u);
  EXPECT_EQ(turn.events[0].kind, LearnerEventKind::Reprompt);
  EXPECT_EQ(turn.events[1].kind, LearnerEventKind::Reprompt);
  EXPECT_EQ(turn.events[2].kind, LearnerEventKind::ForcedQuestion);
  const auto& q = std::get<Question>(turn.move);
  EXPECT_NE(std::find(informative.begin(), informative.end(), std::get<Predicate>(q)), informative.end());
  ASSERT_EQ(model.requests().size(), 3u);
  EXPECT_EQ(model.requests()[2].messages.size(), 6u);
}

TEST(LlmLearner, QuestionWithNoBudgetForcesGuess) {
  const auto o = zorblax();
  const LearnerView view{{"Zorblax", "Quexil"}, true, {}, 0, "ctx"};
  QueueTransport model({"QUESTION: Diet = Herbivore?"});
  const auto turn = llm_learner_turn(view, model, *o, {}, {{}, {"Quexil", "Zorblax"}, nullptr});
  EXPECT_EQ(turn.events.back().kind, LearnerEventKind::ForcedGuess);
  EXPECT_EQ(std::get<Guess>(turn.move).species, "Quexil");
}

TEST(LlmLearner, GuessOutsideCandidatesIsReprompted) {
  const auto o = zorblax();
  const LearnerView view{{"Zorblax", "Quexil"}, true, {}, 5, "ctx"};
  QueueTransport model({"GUESS: Vorthan", "GUESS: Quexil"});
  const auto turn = llm_learner_turn(view, model, *o, {}, {});
  ASSERT_EQ(turn.events.size(), 1u);
  EXPECT_EQ(std::get<Guess>(turn.move).species, "Quexil");
}

TEST(LlmLearner, ExpertContextHoldsOntology) {
  const auto& o = *zorblax();
  const auto ctx = expert_knowledge_context(o);
  EXPECT_NE(ctx.find(serialize(o).substr(0, 40)), std::string::npos);
}

}  // namespace
}  // namespace social_gym

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "social_gym/agents.hpp"
#include "social_gym/random.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

using testing::fixture;
using testing::zorblax;

ParseFailureReason reason_of(std::string_view text) {
  const auto parsed = parse_learner_utterance(text, *zorblax());
  EXPECT_TRUE(std::holds_alternative<ParseFailure>(parsed)) << text;
  if (!std::holds_alternative<ParseFailure>(parsed)) return ParseFailureReason::Empty;
  return std::get<ParseFailure>(parsed).reason;
}

TEST(Parser, StrictQuestionIsPredicate) {
  const auto parsed = parse_learner_utterance("QUESTION: Habitat = Acid bog?", *zorblax());
  const auto& q = std::get<Question>(parsed);
  ASSERT_TRUE(std::holds_alternative<Predicate>(q));
  EXPECT_EQ(std::get<Predicate>(q), (Predicate{"Habitat", "Acid bog"}));
}

TEST(Parser, LenientQuestionKeepsRawText) {
  const std::string text = "Does it live in the acid bog?";
  const auto parsed = parse_learner_utterance(text, *zorblax());
  const auto& q = std::get<Question>(parsed);
  ASSERT_TRUE(std::holds_alternative<FreeTextQuestion>(q));
  EXPECT_EQ(std::get<FreeTextQuestion>(q).raw, text);
  EXPECT_EQ(std::get<FreeTextQuestion>(q).parsed, (Predicate{"Habitat", "Acid bog"}));
}

TEST(Parser, StrictGuess) {
  EXPECT_EQ(std::get<Guess>(parse_learner_utterance("GUESS: Quexil", *zorblax())).species, "Quexil");
}

TEST(Parser, FailureReasons) {
  EXPECT_EQ(reason_of(""), ParseFailureReason::Empty);
  EXPECT_EQ(reason_of("   \n "), ParseFailureReason::Empty);
  EXPECT_EQ(reason_of("Tell me more."), ParseFailureReason::NotYesNo);
  EXPECT_EQ(reason_of("Is it large?"), ParseFailureReason::NoFeatureMention);
  EXPECT_EQ(reason_of("Is it pack or hive?"), ParseFailureReason::Ambiguous);
  EXPECT_EQ(reason_of("QUESTION: Diet = Herbivore?\nGUESS: Zorblax"), ParseFailureReason::Compound);
  EXPECT_EQ(reason_of("QUESTION: Colour = Blue?"), ParseFailureReason::UnknownDimension);
  EXPECT_EQ(reason_of("QUESTION: Habitat = Herbivore?"), ParseFailureReason::ValueOutOfDomain);
  EXPECT_EQ(reason_of("GUESS: Nobody"), ParseFailureReason::UnknownSpecies);
}

TEST(Parser, DimensionMentionResolvesSharedLabel) {
  Ontology o;
  o.dimensions = {{"Colour", {"Red", "Blue"}}, {"Mood", {"Blue", "Calm"}}};
  o.species = {{"A", {{"Colour", "Red"}, {"Mood", "Blue"}}}, {"B", {{"Colour", "Blue"}, {"Mood", "Calm"}}}};
  ASSERT_TRUE(validate(o).empty());
  const auto ambiguous = parse_learner_utterance("Is it blue?", o);
  ASSERT_TRUE(std::holds_alternative<ParseFailure>(ambiguous));
  EXPECT_EQ(std::get<ParseFailure>(ambiguous).reason, ParseFailureReason::Ambiguous);
  const auto resolved = parse_learner_utterance("Is its mood blue?", o);
  EXPECT_EQ(testing::predicate_of(resolved), (Predicate{"Mood", "Blue"}));
}

TEST(Parser, StrictCorpusIsPerfect) {
  const auto score = testing::score_corpus(testing::load_corpus(fixture("strict_utterances.jsonl")), *zorblax());
  EXPECT_EQ(score.total, 30);
  EXPECT_EQ(score.correct, score.total);
  EXPECT_EQ(score.unsound, 0);
}

TEST(Parser, LenientCorpusAtLeastNinetyPercent) {
  const auto score = testing::score_corpus(testing::load_corpus(fixture("lenient_utterances.jsonl")), *zorblax());
  EXPECT_EQ(score.total, 50);
  EXPECT_GE(score.correct * 10, score.total * 9);
  EXPECT_EQ(score.unsound, 0);
  for (const auto& miss : score.misses) std::cout << "[miss] " << miss << "\n";
}

// Random word salad drawn from labels and filler never yields a predicate
// or guess outside the ontology.
TEST(Parser, FuzzNeverUnsound) {
  const auto& o = *zorblax();
  std::vector<std::string> words = {"is", "it", "does", "a", "the", "QUESTION:", "GUESS:", "=", "?", ".", "or",
                                    "and", "live", "in", "**", "\n", "Diet", "habitat", "not", "maybe"};
  for (const auto& d : o.dimensions) {
    words.push_back(d.name);
    for (const auto& v : d.values) words.push_back(v);
  }
  for (const auto& s : o.species) words.push_back(s.name);
  Rng rng(42);
  for (int i = 0; i < 5000; ++i) {
    std::string text;
    const auto n = 1 + rng.below(12);
    for (std::uint64_t w = 0; w < n; ++w) text += words[rng.index(words.size())] + " ";
    const auto parsed = parse_learner_utterance(text, o);
    ASSERT_FALSE(testing::unsound(parsed, o)) << text;
  }
}

}  // namespace
}  // namespace social_gym

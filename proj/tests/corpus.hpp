#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "social_gym/agents.hpp"

namespace social_gym::testing {

struct CorpusCase {
  std::string text;
  nlohmann::json expect;
};

inline std::vector<CorpusCase> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<CorpusCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto doc = nlohmann::json::parse(line);
    out.push_back({doc.at("text").get<std::string>(), doc.at("expect")});
  }
  return out;
}

inline std::optional<Predicate> predicate_of(const ParsedUtterance& parsed) {
  const auto* q = std::get_if<Question>(&parsed);
  if (q == nullptr) return std::nullopt;
  if (const auto* p = std::get_if<Predicate>(q)) return *p;
  return std::get<FreeTextQuestion>(*q).parsed;
}

inline bool matches(const ParsedUtterance& parsed, const nlohmann::json& expect) {
  if (expect.contains("question")) {
    const auto p = predicate_of(parsed);
    return p && p->dimension == expect["question"]["dimension"] && p->value == expect["question"]["value"];
  }
  if (expect.contains("guess")) {
    const auto* g = std::get_if<Guess>(&parsed);
    return g != nullptr && g->species == expect["guess"];
  }
  const auto* f = std::get_if<ParseFailure>(&parsed);
  return f != nullptr && to_string(f->reason) == expect["failure"].get<std::string>();
}

// A returned predicate or guess that does not exist in the ontology.
inline bool unsound(const ParsedUtterance& parsed, const Ontology& ontology) {
  if (const auto p = predicate_of(parsed)) return !is_valid(*p, ontology);
  if (std::holds_alternative<Question>(parsed)) return true;  // question with nothing parsed
  if (const auto* g = std::get_if<Guess>(&parsed)) return ontology.find_species(g->species) == nullptr;
  return false;
}

struct CorpusScore {
  int total = 0;
  int correct = 0;
  int unsound = 0;
  std::vector<std::string> misses;
};

inline CorpusScore score_corpus(const std::vector<CorpusCase>& cases, const Ontology& ontology) {
  CorpusScore score;
  for (const auto& c : cases) {
    const auto parsed = parse_learner_utterance(c.text, ontology);
    ++score.total;
    if (matches(parsed, c.expect)) {
      ++score.correct;
    } else {
      score.misses.push_back(c.text);
    }
    if (unsound(parsed, ontology)) ++score.unsound;
  }
  return score;
}

}  // namespace social_gym::testing

#include "social_gym/game.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "social_gym/error.hpp"
#include "social_gym/random.hpp"

namespace social_gym {

std::string to_string(const Predicate& predicate) {
  return fmt::format("{} = {}", predicate.dimension, predicate.value);
}

bool is_valid(const Predicate& predicate, const Ontology& ontology) {
  const auto* dim = ontology.find_dimension(predicate.dimension);
  return dim != nullptr && dim->has_value(predicate.value);
}

std::string_view to_string(Answer answer) noexcept { return answer == Answer::Yes ? "YES" : "NO"; }

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Asking: return "ASKING";
    case Phase::Guessed: return "GUESSED";
    case Phase::Exhausted: return "EXHAUSTED";
  }
  return "ASKING";
}

Answer oracle_answer(const Ontology& ontology, std::string_view target, const Predicate& predicate) {
  if (!is_valid(predicate, ontology)) {
    throw Error(ErrorCode::InvalidPredicate, fmt::format("invalid predicate '{}'", to_string(predicate)));
  }
  return feature_value(ontology, target, predicate.dimension) == predicate.value ? Answer::Yes : Answer::No;
}

std::vector<CandidateSet> sample_candidate_sets(const Ontology& ontology, int n, int k, std::uint64_t seed) {
  const auto species_count = ontology.species.size();
  if (k < 1 || static_cast<std::size_t>(k) > species_count) {
    throw Error(ErrorCode::KTooLarge, fmt::format("cannot draw {} candidates from {} species", k, species_count));
  }
  if (n < 0) throw Error(ErrorCode::InvalidConfig, "number of candidate sets must be non-negative");

  Rng rng(seed);
  std::vector<std::size_t> indices(species_count);
  std::vector<CandidateSet> sets;
  sets.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < species_count; ++i) indices[i] = i;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      std::swap(indices[i], indices[i + rng.index(species_count - i)]);
    }
    std::vector<std::size_t> chosen(indices.begin(), indices.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    CandidateSet set;
    for (auto idx : chosen) set.candidates.push_back(ontology.species[idx].name);
    set.target = set.candidates[rng.index(set.candidates.size())];
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<std::string> filter_consistent(const Ontology& ontology, std::span<const std::string> candidates,
                                           std::span<const LogEntry> log) {
  std::vector<std::string> out;
  for (const auto& name : candidates) {
    const bool agrees = std::all_of(log.begin(), log.end(), [&](const LogEntry& e) {
      return oracle_answer(ontology, name, e.predicate) == e.answer;
    });
    if (agrees) out.push_back(name);
  }
  return out;
}

TrialState::TrialState(std::shared_ptr<const Ontology> ontology, std::vector<std::string> candidates,
                       std::string target, int budget, TrialMeta meta)
    : ontology_(std::move(ontology)),
      candidates_(std::move(candidates)),
      target_(std::move(target)),
      budget_(budget),
      meta_(std::move(meta)) {
  if (!ontology_) throw Error(ErrorCode::InvalidConfig, "trial needs an ontology");
  if (budget_ < 1) throw Error(ErrorCode::InvalidConfig, "question budget must be >= 1");
  if (candidates_.empty()) throw Error(ErrorCode::InvalidConfig, "trial needs at least one candidate");
  std::set<std::string> seen;
  for (const auto& name : candidates_) {
    if (ontology_->find_species(name) == nullptr) {
      throw Error(ErrorCode::UnknownSpecies, fmt::format("candidate '{}' is not in the ontology", name));
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("candidate '{}' listed twice", name));
    }
  }
  if (!seen.contains(target_)) {
    throw Error(ErrorCode::UnknownCandidate, fmt::format("target '{}' is not among the candidates", target_));
  }
  consistent_ = candidates_;
}

Answer TrialState::ask(const Question& question) {
  if (phase_ == Phase::Guessed) throw Error(ErrorCode::WrongPhase, "trial already finished with a guess");
  if (phase_ == Phase::Exhausted) {
    throw Error(ErrorCode::BudgetExhausted, fmt::format("question budget of {} is spent", budget_));
  }
  const Predicate* predicate = std::get_if<Predicate>(&question);
  if (const auto* text = std::get_if<FreeTextQuestion>(&question)) {
    if (!text->parsed) throw Error(ErrorCode::InvalidPredicate, fmt::format("unparsed question '{}'", text->raw));
    predicate = &*text->parsed;
  }
  const Answer answer = oracle_answer(*ontology_, target_, *predicate);
  log_.push_back({*predicate, answer});
  const LogEntry& entry = log_.back();
  std::erase_if(consistent_, [&](const std::string& name) {
    return oracle_answer(*ontology_, name, entry.predicate) != entry.answer;
  });
  if (static_cast<int>(log_.size()) >= budget_) phase_ = Phase::Exhausted;
  return answer;
}

TrialRecord TrialState::submit_guess(std::string_view species_name) {
  if (phase_ == Phase::Guessed) throw Error(ErrorCode::WrongPhase, "a guess was already submitted");
  if (std::find(candidates_.begin(), candidates_.end(), species_name) == candidates_.end()) {
    throw Error(ErrorCode::UnknownCandidate, fmt::format("'{}' is not a candidate in this trial", species_name));
  }
  phase_ = Phase::Guessed;
  TrialRecord record;
  record.candidate_names = candidates_;
  record.target = target_;
  record.log = log_;
  record.question_count = static_cast<int>(log_.size());
  record.final_guess = std::string(species_name);
  record.correct = record.final_guess == target_;
  record.strategy_label = meta_.strategy_label;
  record.trial_index = meta_.trial_index;
  record.rng_seed = meta_.rng_seed;
  return record;
}

nlohmann::ordered_json to_json(const TrialRecord& record) {
  nlohmann::ordered_json log = nlohmann::ordered_json::array();
  for (const auto& e : record.log) {
    log.push_back({{"dimension", e.predicate.dimension},
                   {"value", e.predicate.value},
                   {"answer", std::string(to_string(e.answer))}});
  }
  nlohmann::ordered_json doc;
  doc["candidate_names"] = record.candidate_names;
  doc["target"] = record.target;
  doc["log"] = std::move(log);
  doc["question_count"] = record.question_count;
  doc["final_guess"] = record.final_guess;
  doc["correct"] = record.correct;
  doc["strategy_label"] = record.strategy_label;
  doc["trial_index"] = record.trial_index;
  doc["rng_seed"] = record.rng_seed;
  return doc;
}

TrialRecord record_from_json(const nlohmann::json& document) {
  try {
    TrialRecord record;
    record.candidate_names = document.at("candidate_names").get<std::vector<std::string>>();
    record.target = document.at("target").get<std::string>();
    for (const auto& e : document.at("log")) {
      const auto answer = e.at("answer").get<std::string>();
      if (answer != "YES" && answer != "NO") throw Error(ErrorCode::ParseFailed, "answer must be YES or NO");
      record.log.push_back({{e.at("dimension").get<std::string>(), e.at("value").get<std::string>()},
                            answer == "YES" ? Answer::Yes : Answer::No});
    }
    record.question_count = document.at("question_count").get<int>();
    record.final_guess = document.at("final_guess").get<std::string>();
    record.correct = document.at("correct").get<bool>();
    record.strategy_label = document.at("strategy_label").get<std::string>();
    record.trial_index = document.at("trial_index").get<int>();
    record.rng_seed = document.at("rng_seed").get<std::uint64_t>();
    if (record.question_count != static_cast<int>(record.log.size())) {
      throw Error(ErrorCode::ParseFailed, "question_count does not match log length");
    }
    if (record.correct != (record.final_guess == record.target)) {
      throw Error(ErrorCode::ParseFailed, "correct flag disagrees with final_guess/target");
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailed, fmt::format("malformed trial record: {}", e.what()));
  }
}

}  // namespace social_gym

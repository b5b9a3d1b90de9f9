#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "social_gym/ontology.hpp"

namespace social_gym {

inline constexpr int kDefaultBudget = 20;
inline constexpr int kDefaultCandidates = 8;
inline constexpr int kDefaultTrials = 50;

// "Is <dimension> equal to <value>?"
struct Predicate {
  std::string dimension;
  std::string value;

  bool operator==(const Predicate&) const = default;
};

std::string to_string(const Predicate& predicate);
bool is_valid(const Predicate& predicate, const Ontology& ontology);

enum class Answer { Yes, No };

std::string_view to_string(Answer answer) noexcept;

// Free text from a model, with the predicate the parser extracted (if any).
struct FreeTextQuestion {
  std::string raw;
  std::optional<Predicate> parsed;
};

using Question = std::variant<Predicate, FreeTextQuestion>;

// Pure; YES iff the target's value on the predicate's dimension equals the
// predicate's value. Throws Error(InvalidPredicate) / Error(UnknownSpecies).
Answer oracle_answer(const Ontology& ontology, std::string_view target, const Predicate& predicate);

struct CandidateSet {
  std::vector<std::string> candidates;  // ontology order
  std::string target;

  bool operator==(const CandidateSet&) const = default;
};

// n sets of k distinct species, each with a uniformly drawn target.
// Throws Error(KTooLarge) if k exceeds the species count.
std::vector<CandidateSet> sample_candidate_sets(const Ontology& ontology, int n, int k, std::uint64_t seed);

struct LogEntry {
  Predicate predicate;
  Answer answer;

  bool operator==(const LogEntry&) const = default;
};

// Candidates whose features agree with every answer in the log.
std::vector<std::string> filter_consistent(const Ontology& ontology, std::span<const std::string> candidates,
                                           std::span<const LogEntry> log);

enum class Phase { Asking, Guessed, Exhausted };

std::string_view to_string(Phase phase) noexcept;

struct TrialMeta {
  std::string strategy_label;
  int trial_index = 0;
  std::uint64_t rng_seed = 0;
};

struct TrialRecord {
  std::vector<std::string> candidate_names;
  std::string target;
  std::vector<LogEntry> log;
  int question_count = 0;
  std::string final_guess;
  bool correct = false;
  std::string strategy_label;
  int trial_index = 0;
  std::uint64_t rng_seed = 0;

  bool operator==(const TrialRecord&) const = default;
};

nlohmann::ordered_json to_json(const TrialRecord& record);
TrialRecord record_from_json(const nlohmann::json& document);

// One 20-Questions game. Transitions are single-threaded; copy the state to
// explore alternatives.
class TrialState {
 public:
  TrialState(std::shared_ptr<const Ontology> ontology, std::vector<std::string> candidates, std::string target,
             int budget = kDefaultBudget, TrialMeta meta = {});

  // Throws WRONG_PHASE after a guess, BUDGET_EXHAUSTED once the budget is
  // spent, INVALID_PREDICATE for unparsed or invalid questions.
  Answer ask(const Question& question);

  // The guess is free: it does not consume budget. Throws UNKNOWN_CANDIDATE
  // or WRONG_PHASE (already guessed).
  TrialRecord submit_guess(std::string_view species_name);

  const Ontology& ontology() const noexcept { return *ontology_; }
  const std::shared_ptr<const Ontology>& shared_ontology() const noexcept { return ontology_; }
  const std::vector<std::string>& candidates() const noexcept { return candidates_; }
  const std::string& hidden_target() const noexcept { return target_; }
  int budget_total() const noexcept { return budget_; }
  int budget_remaining() const noexcept { return budget_ - static_cast<int>(log_.size()); }
  const std::vector<LogEntry>& log() const noexcept { return log_; }
  const std::vector<std::string>& consistent_set() const noexcept { return consistent_; }
  Phase phase() const noexcept { return phase_; }
  const TrialMeta& meta() const noexcept { return meta_; }

 private:
  std::shared_ptr<const Ontology> ontology_;
  std::vector<std::string> candidates_;
  std::string target_;
  int budget_;
  TrialMeta meta_;
  std::vector<LogEntry> log_;
  std::vector<std::string> consistent_;
  Phase phase_ = Phase::Asking;
};

}  // namespace social_gym

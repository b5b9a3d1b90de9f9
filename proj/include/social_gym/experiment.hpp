#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "social_gym/agents.hpp"
#include "social_gym/game.hpp"
#include "social_gym/http_transport.hpp"
#include "social_gym/ontology.hpp"
#include "social_gym/pedagogy.hpp"
#include "social_gym/prompts.hpp"
#include "social_gym/stats.hpp"
#include "social_gym/strategy.hpp"
#include "social_gym/transport.hpp"

namespace social_gym {

enum class LearnerKind { Llm, Halving, Random };
enum class BackendKind { Scripted, Http };

std::string_view to_string(LearnerKind kind) noexcept;
std::string_view to_string(BackendKind kind) noexcept;

struct ExperimentConfig {
  // Either a file, or a procedural ontology from these parameters.
  std::optional<std::filesystem::path> ontology_path;
  std::uint64_t ontology_seed = 42;
  int ontology_dims = 5;
  int ontology_values = 3;
  int ontology_species = 10;

  std::vector<std::string> strategies;  // labels; empty means all ten + EXPERT
  int trials = kDefaultTrials;
  int candidates = kDefaultCandidates;
  int budget = kDefaultBudget;
  std::uint64_t seed = 0;

  CassetteMode transport = CassetteMode::Passthrough;
  std::optional<std::filesystem::path> cassette;
  BackendKind backend = BackendKind::Scripted;
  std::string model = "gpt-4o";
  std::string base_url = "https://api.openai.com/v1";
  std::optional<std::string> api_key;
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;

  LearnerKind learner = LearnerKind::Llm;
  LearnerKind expert_learner = LearnerKind::Llm;
  int reprompt_attempts = 3;
  bool disclose_candidates = true;
  int total_turns = 20;
  int monologic_segments = 10;
  bool summaries = true;
  std::optional<std::filesystem::path> prompts_dir;

  std::filesystem::path output = "out";
  int jobs = 1;

  // Labels in run order, with the default applied.
  std::vector<std::string> condition_labels() const;
  SessionConfig session_config() const;
  LlmLearnerConfig learner_config() const;
};

// Flat "key = value" lines ('#' comments, optional quotes, comma lists with
// or without brackets), or a JSON object with the same keys. Relative input
// paths (ontology, cassette, prompts_dir) are resolved against `base_dir`.
// Throws Error(InvalidConfig).
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies one setting on top of an existing config; used for flag overrides.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

// Throws Error(InvalidConfig) for out-of-range values or unknown labels.
void check_config(const ExperimentConfig& config);

// Everything that determines results; output location, paths and job count
// are left out so relocated reruns hash the same.
nlohmann::ordered_json to_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

// Resolved inputs shared by every condition of a run.
struct ExperimentContext {
  ExperimentConfig config;
  std::shared_ptr<const Ontology> ontology;
  std::vector<CandidateSet> candidate_sets;
  PromptLibrary prompts;
  std::shared_ptr<ChatTransport> transport;
  std::shared_ptr<CassetteTransport> cassette;
  // Set in REPLAY mode; counts attempted live calls (must stay 0).
  std::shared_ptr<ForbidLiveTransport> live_guard;
};

// Loads or generates the ontology, samples the shared candidate sets and
// wires the transport. `backend` replaces the configured live backend.
ExperimentContext prepare_experiment(const ExperimentConfig& config, std::shared_ptr<ChatTransport> backend = nullptr);

struct ConditionResult {
  std::string label;
  std::vector<TrialRecord> records;
  Summary summary;
  std::vector<LearnerEvent> events;
};

struct RunHooks {
  // Called before each trial that is actually executed.
  std::function<void(const std::string& label, int trial_index)> before_trial;
};

// Seed for one trial's agent randomness.
std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view label, int trial_index);

// Teaches once (skipped for EXPERT), then plays the configured number of
// trials, appending each record to records/<label>.jsonl as it completes.
// Completed trials found on disk are not re-run; an interrupted teaching
// session is resumed from transcripts/<label>.partial.json.
ConditionResult run_condition(ExperimentContext& context, std::string_view label, const RunHooks& hooks = {});

// All conditions (in parallel when config.jobs > 1), then the report.
std::vector<ConditionResult> run_experiment(ExperimentContext& context, const RunHooks& hooks = {});

// Records file helpers. Reading drops a torn final line.
std::vector<TrialRecord> read_records(const std::filesystem::path& path);
void append_record(const std::filesystem::path& path, const TrialRecord& record);

enum class GroupAxis { Framing, Control };

std::string_view to_string(GroupAxis axis) noexcept;

struct GroupedResult {
  std::string cell;  // "TOP_DOWN", "LEARNER_Q", ...
  std::vector<std::string> labels;
  std::vector<TrialRecord> records;
  Summary summary;
};

// Pools records per framing or per initiative cell, in canonical cell order;
// empty cells are omitted. EXPERT and unknown labels raise UNKNOWN_LABEL.
std::vector<GroupedResult> group_by(const std::vector<ConditionResult>& results, GroupAxis axis);

}  // namespace social_gym

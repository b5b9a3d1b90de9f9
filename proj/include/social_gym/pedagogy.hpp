#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "social_gym/error.hpp"
#include "social_gym/ontology.hpp"
#include "social_gym/prompts.hpp"
#include "social_gym/strategy.hpp"
#include "social_gym/transport.hpp"

namespace social_gym {

enum class Speaker { Teacher, Learner };
enum class TurnKind { Exposition, Question, Answer, Summary };

std::string_view to_string(Speaker speaker) noexcept;
std::string_view to_string(TurnKind kind) noexcept;

struct DialogueTurn {
  int index = 0;
  Speaker speaker = Speaker::Teacher;
  TurnKind kind = TurnKind::Exposition;
  std::string content;

  bool operator==(const DialogueTurn&) const = default;
};

struct Transcript {
  std::string strategy_label;
  std::vector<DialogueTurn> turns;
  std::string ontology_fingerprint;

  bool operator==(const Transcript&) const = default;
};

struct SessionConfig {
  // Question/answer turns for dialogic strategies, both agents together.
  int total_turns = 20;
  int monologic_segments = 10;
  bool summary_after_teacher_turn = true;
  std::string model_name = "gpt-4o";
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;
};

// Throws Error(InvalidConfig) for odd or non-positive turn counts.
void check_session_config(const SessionConfig& config);

// What the orchestrator wants from an agent next. `round` is 1-based: the
// exposition segment for monologic sessions, the question/answer exchange
// for dialogic ones.
struct TurnRequest {
  TurnKind kind = TurnKind::Exposition;
  int round = 1;
  int rounds = 1;
};

// Agents are stateless between turns; everything they know about the
// session arrives through the history.
class SessionAgent {
 public:
  virtual ~SessionAgent() = default;
  virtual std::string speak(StrategyId strategy, std::span<const DialogueTurn> history,
                            const TurnRequest& request) = 0;
};

struct PlannedTurn {
  Speaker speaker;
  TurnKind kind;
  int round;
};

// The exact turn sequence run_session produces for a strategy.
std::vector<PlannedTurn> plan_session(StrategyId strategy, const SessionConfig& config);

// Raised when an agent fails mid-session (typically a transport error). The
// partial transcript is a valid prefix and can be passed back to run_session
// to resume.
class SessionAborted : public Error {
 public:
  SessionAborted(ErrorCode cause, const std::string& message, Transcript partial)
      : Error(cause, message), partial_(std::move(partial)) {}

  const Transcript& partial() const noexcept { return partial_; }

 private:
  Transcript partial_;
};

Transcript run_session(StrategyId strategy, const Ontology& ontology, SessionAgent& teacher, SessionAgent& learner,
                       const SessionConfig& config, const std::optional<Transcript>& resume_from = std::nullopt);

struct TranscriptExpectations {
  // Question/answer turns (dialogic) or exposition segments (monologic).
  std::optional<int> content_turns;
  bool summaries = true;
};

// Empty iff indices are contiguous from 0, every summary is a learner turn
// directly after a teacher turn, every teacher turn is followed by a summary
// (when expected), and the non-summary turns follow the strategy's
// initiative pattern.
std::vector<std::string> validate_transcript(const Transcript& transcript,
                                             const TranscriptExpectations& expectations = {});

inline constexpr std::string_view kLessonHeader = "You previously had this lesson about alien species:";

std::string transcript_to_learner_context(const Transcript& transcript);

nlohmann::ordered_json to_json(const Transcript& transcript);
Transcript transcript_from_json(const nlohmann::json& document);
void save_transcript(const std::filesystem::path& path, const Transcript& transcript);
Transcript load_transcript(const std::filesystem::path& path);

// Full ontology plus framing and initiative instructions for the strategy.
std::string build_teacher_system_prompt(StrategyId strategy, const Ontology& ontology, const SessionConfig& config = {},
                                        const PromptLibrary& prompts = PromptLibrary::builtin());
std::string build_learner_training_prompt(StrategyId strategy,
                                          const PromptLibrary& prompts = PromptLibrary::builtin());
std::string turn_instruction(Speaker speaker, const TurnRequest& request,
                             const PromptLibrary& prompts = PromptLibrary::builtin());

// Chat-model-backed session participant.
class LlmSessionAgent final : public SessionAgent {
 public:
  LlmSessionAgent(Speaker role, std::string system_prompt, std::shared_ptr<ChatTransport> transport,
                  SessionConfig config, const PromptLibrary& prompts = PromptLibrary::builtin());

  std::string speak(StrategyId strategy, std::span<const DialogueTurn> history, const TurnRequest& request) override;

  // Messages this agent would send for the given turn.
  ChatRequest build_request(std::span<const DialogueTurn> history, const TurnRequest& request) const;

 private:
  Speaker role_;
  std::string system_prompt_;
  std::shared_ptr<ChatTransport> transport_;
  SessionConfig config_;
  const PromptLibrary* prompts_;
};

}  // namespace social_gym

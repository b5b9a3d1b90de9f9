#include "social_gym/pedagogy.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace social_gym {
namespace {

using json = nlohmann::json;

Speaker speaker_from_string(std::string_view text) {
  if (text == "TEACHER") return Speaker::Teacher;
  if (text == "LEARNER") return Speaker::Learner;
  throw Error(ErrorCode::ParseFailed, fmt::format("unknown speaker '{}'", text));
}

TurnKind kind_from_string(std::string_view text) {
  if (text == "EXPOSITION") return TurnKind::Exposition;
  if (text == "QUESTION") return TurnKind::Question;
  if (text == "ANSWER") return TurnKind::Answer;
  if (text == "SUMMARY") return TurnKind::Summary;
  throw Error(ErrorCode::ParseFailed, fmt::format("unknown turn kind '{}'", text));
}

std::string_view initiative_template(StrategyId strategy) {
  switch (strategy) {
    case StrategyId::TD:
    case StrategyId::BU: return "initiative_monologic";
    case StrategyId::LQ: return "initiative_lq";
    case StrategyId::TQ: return "initiative_tq";
    case StrategyId::DialLq: return "initiative_dial_lq";
    case StrategyId::DialTq: return "initiative_dial_tq";
    case StrategyId::DialTdLq:
    case StrategyId::DialBuLq: return "initiative_scaffold_lq";
    case StrategyId::DialTdTq:
    case StrategyId::DialBuTq: return "initiative_scaffold_tq";
  }
  return "initiative_monologic";
}

std::string_view framing_template(Framing framing) {
  switch (framing) {
    case Framing::TopDown: return "framing_top_down";
    case Framing::BottomUp: return "framing_bottom_up";
    case Framing::None: return "framing_none";
  }
  return "framing_none";
}

}  // namespace

std::string_view to_string(Speaker speaker) noexcept { return speaker == Speaker::Teacher ? "TEACHER" : "LEARNER"; }

std::string_view to_string(TurnKind kind) noexcept {
  switch (kind) {
    case TurnKind::Exposition: return "EXPOSITION";
    case TurnKind::Question: return "QUESTION";
    case TurnKind::Answer: return "ANSWER";
    case TurnKind::Summary: return "SUMMARY";
  }
  return "EXPOSITION";
}

void check_session_config(const SessionConfig& config) {
  if (config.total_turns < 2 || config.total_turns % 2 != 0) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("total_turns must be a positive even number, got {}", config.total_turns));
  }
  if (config.monologic_segments < 1) throw Error(ErrorCode::InvalidConfig, "monologic_segments must be >= 1");
}

std::vector<PlannedTurn> plan_session(StrategyId strategy, const SessionConfig& config) {
  check_session_config(config);
  std::vector<PlannedTurn> plan;
  const bool summaries = config.summary_after_teacher_turn;
  switch (initiative(strategy)) {
    case Initiative::Monologic:
      for (int r = 1; r <= config.monologic_segments; ++r) {
        plan.push_back({Speaker::Teacher, TurnKind::Exposition, r});
        if (summaries) plan.push_back({Speaker::Learner, TurnKind::Summary, r});
      }
      break;
    case Initiative::LearnerQ:
      for (int r = 1; r <= config.total_turns / 2; ++r) {
        plan.push_back({Speaker::Learner, TurnKind::Question, r});
        plan.push_back({Speaker::Teacher, TurnKind::Answer, r});
        if (summaries) plan.push_back({Speaker::Learner, TurnKind::Summary, r});
      }
      break;
    case Initiative::TeacherQ:
      // The teacher's question carries its feedback on the previous answer,
      // so the summary follows the question and precedes the learner's reply.
      for (int r = 1; r <= config.total_turns / 2; ++r) {
        plan.push_back({Speaker::Teacher, TurnKind::Question, r});
        if (summaries) plan.push_back({Speaker::Learner, TurnKind::Summary, r});
        plan.push_back({Speaker::Learner, TurnKind::Answer, r});
      }
      break;
  }
  return plan;
}

Transcript run_session(StrategyId strategy, const Ontology& ontology, SessionAgent& teacher, SessionAgent& learner,
                       const SessionConfig& config, const std::optional<Transcript>& resume_from) {
  const auto plan = plan_session(strategy, config);
  const int rounds = initiative(strategy) == Initiative::Monologic ? config.monologic_segments : config.total_turns / 2;

  Transcript transcript;
  transcript.strategy_label = std::string(label(strategy));
  transcript.ontology_fingerprint = fingerprint(ontology);
  if (resume_from) {
    if (resume_from->strategy_label != transcript.strategy_label ||
        resume_from->ontology_fingerprint != transcript.ontology_fingerprint ||
        resume_from->turns.size() > plan.size()) {
      throw Error(ErrorCode::InvalidTranscript, "checkpoint does not belong to this session");
    }
    for (std::size_t i = 0; i < resume_from->turns.size(); ++i) {
      const auto& turn = resume_from->turns[i];
      if (turn.index != static_cast<int>(i) || turn.speaker != plan[i].speaker || turn.kind != plan[i].kind) {
        throw Error(ErrorCode::InvalidTranscript, fmt::format("checkpoint diverges from the session plan at turn {}", i));
      }
    }
    transcript.turns = resume_from->turns;
  }

  for (std::size_t i = transcript.turns.size(); i < plan.size(); ++i) {
    const auto& step = plan[i];
    SessionAgent& agent = step.speaker == Speaker::Teacher ? teacher : learner;
    std::string content;
    try {
      content = agent.speak(strategy, transcript.turns, TurnRequest{step.kind, step.round, rounds});
    } catch (const Error& e) {
      throw SessionAborted(e.code(), fmt::format("session {} aborted at turn {}: {}", transcript.strategy_label, i, e.what()),
                           transcript);
    }
    transcript.turns.push_back({static_cast<int>(i), step.speaker, step.kind, std::move(content)});
  }
  return transcript;
}

std::vector<std::string> validate_transcript(const Transcript& transcript, const TranscriptExpectations& expectations) {
  std::vector<std::string> problems;
  const auto strategy = strategy_from_label(transcript.strategy_label);
  if (!strategy) {
    problems.push_back(fmt::format("unknown strategy label '{}'", transcript.strategy_label));
    return problems;
  }
  const auto& turns = transcript.turns;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const auto& turn = turns[i];
    if (turn.index != static_cast<int>(i)) {
      problems.push_back(fmt::format("turn {} carries index {}", i, turn.index));
    }
    if (turn.kind == TurnKind::Summary) {
      if (!expectations.summaries) problems.push_back(fmt::format("turn {}: unexpected summary", i));
      if (turn.speaker != Speaker::Learner) problems.push_back(fmt::format("turn {}: summary not spoken by learner", i));
      if (i == 0 || turns[i - 1].speaker != Speaker::Teacher) {
        problems.push_back(fmt::format("turn {}: summary does not follow a teacher turn", i));
      }
    } else if (turn.speaker == Speaker::Teacher && expectations.summaries) {
      if (i + 1 >= turns.size() || turns[i + 1].kind != TurnKind::Summary) {
        problems.push_back(fmt::format("turn {}: teacher contribution not followed by a learner summary", i));
      }
    }
  }

  std::vector<const DialogueTurn*> content;
  for (const auto& turn : turns) {
    if (turn.kind != TurnKind::Summary) content.push_back(&turn);
  }
  const auto init = initiative(*strategy);
  for (std::size_t j = 0; j < content.size(); ++j) {
    const auto& turn = *content[j];
    Speaker want_speaker = Speaker::Teacher;
    TurnKind want_kind = TurnKind::Exposition;
    if (init == Initiative::LearnerQ) {
      want_speaker = j % 2 == 0 ? Speaker::Learner : Speaker::Teacher;
      want_kind = j % 2 == 0 ? TurnKind::Question : TurnKind::Answer;
    } else if (init == Initiative::TeacherQ) {
      want_speaker = j % 2 == 0 ? Speaker::Teacher : Speaker::Learner;
      want_kind = j % 2 == 0 ? TurnKind::Question : TurnKind::Answer;
    }
    if (turn.speaker != want_speaker || turn.kind != want_kind) {
      problems.push_back(fmt::format("turn {}: expected {} {}, found {} {} ({} initiative)", turn.index,
                                     to_string(want_speaker), to_string(want_kind), to_string(turn.speaker),
                                     to_string(turn.kind), to_string(init)));
    }
  }
  if (init != Initiative::Monologic && content.size() % 2 != 0) {
    problems.push_back("dialogue ends with an unanswered question");
  }
  if (expectations.content_turns && static_cast<int>(content.size()) != *expectations.content_turns) {
    problems.push_back(fmt::format("expected {} content turns, found {}", *expectations.content_turns, content.size()));
  }
  return problems;
}

std::string transcript_to_learner_context(const Transcript& transcript) {
  std::string out(kLessonHeader);
  for (const auto& turn : transcript.turns) {
    out += '\n';
    out += turn.speaker == Speaker::Teacher ? "Teacher: " : "Learner: ";
    out += turn.content;
  }
  return out;
}

nlohmann::ordered_json to_json(const Transcript& transcript) {
  nlohmann::ordered_json turns = nlohmann::ordered_json::array();
  for (const auto& t : transcript.turns) {
    turns.push_back({{"index", t.index},
                     {"speaker", std::string(to_string(t.speaker))},
                     {"kind", std::string(to_string(t.kind))},
                     {"content", t.content}});
  }
  nlohmann::ordered_json doc;
  doc["strategy_label"] = transcript.strategy_label;
  doc["ontology_fingerprint"] = transcript.ontology_fingerprint;
  doc["turns"] = std::move(turns);
  return doc;
}

Transcript transcript_from_json(const json& document) {
  try {
    Transcript transcript;
    transcript.strategy_label = document.at("strategy_label").get<std::string>();
    transcript.ontology_fingerprint = document.value("ontology_fingerprint", "");
    for (const auto& t : document.at("turns")) {
      transcript.turns.push_back({t.at("index").get<int>(), speaker_from_string(t.at("speaker").get<std::string>()),
                                  kind_from_string(t.at("kind").get<std::string>()), t.at("content").get<std::string>()});
    }
    return transcript;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailed, fmt::format("malformed transcript: {}", e.what()));
  }
}

void save_transcript(const std::filesystem::path& path, const Transcript& transcript) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << to_json(transcript).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Transcript load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return transcript_from_json(json::parse(buffer.str()));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseFailed, fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string build_teacher_system_prompt(StrategyId strategy, const Ontology& ontology, const SessionConfig& config,
                                        const PromptLibrary& prompts) {
  const std::string framing_block = prompts.get(framing_template(framing(strategy)));
  const std::string initiative_block =
      prompts.render(initiative_template(strategy), {{"segments", std::to_string(config.monologic_segments)}});
  return prompts.render("teacher_system", {{"strategy_instructions", framing_block + "\n\n" + initiative_block},
                                           {"ontology", strip_trailing_newlines(serialize(ontology))}});
}

std::string build_learner_training_prompt(StrategyId strategy, const PromptLibrary& prompts) {
  std::string_view role = "learner_role_monologic";
  if (initiative(strategy) == Initiative::LearnerQ) role = "learner_role_lq";
  if (initiative(strategy) == Initiative::TeacherQ) role = "learner_role_tq";
  return prompts.render("learner_training_system", {{"role_instructions", prompts.get(role)}});
}

std::string turn_instruction(Speaker speaker, const TurnRequest& request, const PromptLibrary& prompts) {
  const TemplateValues values = {{"segment", std::to_string(request.round)},
                                 {"segments", std::to_string(request.rounds)},
                                 {"turn", std::to_string(request.round)},
                                 {"turns", std::to_string(request.rounds)}};
  if (speaker == Speaker::Teacher) {
    switch (request.kind) {
      case TurnKind::Exposition: return prompts.render("teacher_turn_exposition", values);
      case TurnKind::Answer: return prompts.render("teacher_turn_answer", values);
      case TurnKind::Question: return prompts.render("teacher_turn_question", values);
      case TurnKind::Summary: break;
    }
  } else {
    switch (request.kind) {
      case TurnKind::Question: return prompts.render("learner_turn_question", values);
      case TurnKind::Answer: return prompts.render("learner_turn_answer", values);
      case TurnKind::Summary: return prompts.render("learner_turn_summary", values);
      case TurnKind::Exposition: break;
    }
  }
  throw Error(ErrorCode::InvalidConfig,
              fmt::format("{} cannot produce a {} turn", to_string(speaker), to_string(request.kind)));
}

LlmSessionAgent::LlmSessionAgent(Speaker role, std::string system_prompt, std::shared_ptr<ChatTransport> transport,
                                 SessionConfig config, const PromptLibrary& prompts)
    : role_(role),
      system_prompt_(std::move(system_prompt)),
      transport_(std::move(transport)),
      config_(std::move(config)),
      prompts_(&prompts) {
  if (!transport_) throw Error(ErrorCode::InvalidConfig, "LLM agent needs a transport");
}

ChatRequest LlmSessionAgent::build_request(std::span<const DialogueTurn> history, const TurnRequest& request) const {
  ChatRequest chat;
  chat.model_name = config_.model_name;
  chat.temperature = config_.temperature;
  chat.max_tokens = config_.max_tokens;
  chat.messages.push_back({Role::System, system_prompt_});
  auto append = [&chat](Role role, const std::string& text) {
    if (chat.messages.size() > 1 && chat.messages.back().role == role) {
      chat.messages.back().content += "\n\n" + text;
    } else {
      chat.messages.push_back({role, text});
    }
  };
  for (const auto& turn : history) append(turn.speaker == role_ ? Role::Assistant : Role::User, turn.content);
  append(Role::User, turn_instruction(role_, request, *prompts_));
  return chat;
}

std::string LlmSessionAgent::speak(StrategyId, std::span<const DialogueTurn> history, const TurnRequest& request) {
  return trim(transport_->complete(build_request(history, request)).text);
}

}  // namespace social_gym

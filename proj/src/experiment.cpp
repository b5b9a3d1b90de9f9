#include "social_gym/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "social_gym/error.hpp"
#include "social_gym/hashing.hpp"
#include "social_gym/report.hpp"
#include "social_gym/scripted.hpp"

namespace social_gym {
namespace {

using ojson = nlohmann::ordered_json;

std::string unquote(std::string_view raw) {
  std::string text = trim(raw);
  if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') && text.back() == text.front()) {
    text = text.substr(1, text.size() - 2);
  }
  return text;
}

std::vector<std::string> parse_list(std::string_view raw) {
  std::string text = trim(raw);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') text = text.substr(1, text.size() - 2);
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(',', start);
    auto item = unquote(std::string_view(text).substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view raw) {
  const auto text = unquote(raw);
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("{} must be an integer, got '{}'", key, text));
  }
  return value;
}

double parse_real(std::string_view key, std::string_view raw) {
  const auto text = unquote(raw);
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidConfig, fmt::format("{} must be a number, got '{}'", key, text));
}

bool parse_bool(std::string_view key, std::string_view raw) {
  const auto text = unquote(raw);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw Error(ErrorCode::InvalidConfig, fmt::format("{} must be true or false, got '{}'", key, text));
}

LearnerKind parse_learner(std::string_view key, std::string_view raw) {
  const auto text = unquote(raw);
  if (text == "llm") return LearnerKind::Llm;
  if (text == "halving") return LearnerKind::Halving;
  if (text == "random") return LearnerKind::Random;
  throw Error(ErrorCode::InvalidConfig, fmt::format("{} must be llm, halving or random, got '{}'", key, text));
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view raw) {
  std::filesystem::path p(unquote(raw));
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::string json_value_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::vector<std::string> items;
    for (const auto& v : value) items.push_back(json_value_text(v));
    return fmt::format("{}", fmt::join(items, ","));
  }
  return value.dump();
}

void write_events(const std::filesystem::path& path, const std::vector<LearnerEvent>& events) {
  std::string text;
  for (const auto& e : events) text += to_json(e).dump() + "\n";
  write_text_file(path, text);
}

std::vector<LearnerEvent> read_events(const std::filesystem::path& path) {
  std::vector<LearnerEvent> out;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    try {
      const auto doc = nlohmann::json::parse(line);
      LearnerEvent e;
      const auto kind = doc.at("event").get<std::string>();
      e.kind = kind == "FORCED_QUESTION" ? LearnerEventKind::ForcedQuestion
               : kind == "FORCED_GUESS"  ? LearnerEventKind::ForcedGuess
                                         : LearnerEventKind::Reprompt;
      e.trial_index = doc.at("trial_index").get<int>();
      e.question_number = doc.at("question_number").get<int>();
      e.detail = doc.at("detail").get<std::string>();
      out.push_back(std::move(e));
    } catch (const std::exception&) {
      break;  // torn tail
    }
  }
  return out;
}

Transcript teach(ExperimentContext& context, StrategyId strategy, const std::filesystem::path& out_dir) {
  const auto label = std::string(social_gym::label(strategy));
  const auto final_path = out_dir / "transcripts" / (label + ".json");
  const auto partial_path = out_dir / "transcripts" / (label + ".partial.json");
  const auto session = context.config.session_config();
  const auto fp = fingerprint(*context.ontology);
  TranscriptExpectations expectations;
  expectations.content_turns = initiative(strategy) == Initiative::Monologic ? session.monologic_segments : session.total_turns;
  expectations.summaries = session.summary_after_teacher_turn;

  if (std::filesystem::exists(final_path)) {
    auto done = load_transcript(final_path);
    if (done.ontology_fingerprint == fp && done.strategy_label == label && validate_transcript(done, expectations).empty()) {
      return done;
    }
  }
  if (!context.transport) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("condition {} needs a chat transport to teach", label));
  }
  std::optional<Transcript> resume;
  if (std::filesystem::exists(partial_path)) {
    auto partial = load_transcript(partial_path);
    if (partial.ontology_fingerprint == fp && partial.strategy_label == label) resume = std::move(partial);
  }
  LlmSessionAgent teacher(Speaker::Teacher, build_teacher_system_prompt(strategy, *context.ontology, session, context.prompts),
                          context.transport, session, context.prompts);
  LlmSessionAgent learner(Speaker::Learner, build_learner_training_prompt(strategy, context.prompts), context.transport,
                          session, context.prompts);
  Transcript transcript;
  try {
    transcript = run_session(strategy, *context.ontology, teacher, learner, session, resume);
  } catch (const SessionAborted& aborted) {
    save_transcript(partial_path, aborted.partial());
    throw;
  }
  save_transcript(final_path, transcript);
  std::filesystem::remove(partial_path);
  return transcript;
}

}  // namespace

std::string_view to_string(LearnerKind kind) noexcept {
  switch (kind) {
    case LearnerKind::Llm: return "llm";
    case LearnerKind::Halving: return "halving";
    case LearnerKind::Random: return "random";
  }
  return "llm";
}

std::string_view to_string(BackendKind kind) noexcept { return kind == BackendKind::Http ? "http" : "scripted"; }

std::vector<std::string> ExperimentConfig::condition_labels() const {
  if (!strategies.empty()) return strategies;
  std::vector<std::string> out;
  for (auto id : kAllStrategies) out.emplace_back(label(id));
  out.emplace_back(kExpertLabel);
  return out;
}

SessionConfig ExperimentConfig::session_config() const {
  SessionConfig s;
  s.total_turns = total_turns;
  s.monologic_segments = monologic_segments;
  s.summary_after_teacher_turn = summaries;
  s.model_name = model;
  s.temperature = temperature;
  s.max_tokens = max_tokens;
  return s;
}

LlmLearnerConfig ExperimentConfig::learner_config() const {
  LlmLearnerConfig c;
  c.model_name = model;
  c.temperature = temperature;
  c.max_tokens = max_tokens;
  c.max_attempts = reprompt_attempts;
  return c;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  const std::string k = trim(key);
  if (k == "ontology") {
    config.ontology_path = resolve(base_dir, value);
  } else if (k == "ontology_seed") {
    config.ontology_seed = parse_int<std::uint64_t>(k, value);
  } else if (k == "ontology_dims") {
    config.ontology_dims = parse_int<int>(k, value);
  } else if (k == "ontology_values") {
    config.ontology_values = parse_int<int>(k, value);
  } else if (k == "ontology_species") {
    config.ontology_species = parse_int<int>(k, value);
  } else if (k == "strategies") {
    config.strategies = parse_list(value);
  } else if (k == "trials") {
    config.trials = parse_int<int>(k, value);
  } else if (k == "candidates") {
    config.candidates = parse_int<int>(k, value);
  } else if (k == "budget") {
    config.budget = parse_int<int>(k, value);
  } else if (k == "seed") {
    config.seed = parse_int<std::uint64_t>(k, value);
  } else if (k == "transport") {
    try {
      config.transport = cassette_mode_from_string(unquote(value));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("transport must be replay, record or live, got '{}'", unquote(value)));
    }
  } else if (k == "cassette") {
    config.cassette = resolve(base_dir, value);
  } else if (k == "backend") {
    const auto text = unquote(value);
    if (text == "scripted") config.backend = BackendKind::Scripted;
    else if (text == "http") config.backend = BackendKind::Http;
    else throw Error(ErrorCode::InvalidConfig, fmt::format("backend must be scripted or http, got '{}'", text));
  } else if (k == "model") {
    config.model = unquote(value);
  } else if (k == "base_url") {
    config.base_url = unquote(value);
  } else if (k == "api_key") {
    config.api_key = unquote(value);
  } else if (k == "temperature") {
    config.temperature = parse_real(k, value);
  } else if (k == "max_tokens") {
    config.max_tokens = parse_int<int>(k, value);
  } else if (k == "learner") {
    config.learner = parse_learner(k, value);
  } else if (k == "expert_learner") {
    config.expert_learner = parse_learner(k, value);
  } else if (k == "reprompt_attempts") {
    config.reprompt_attempts = parse_int<int>(k, value);
  } else if (k == "disclose_candidates") {
    config.disclose_candidates = parse_bool(k, value);
  } else if (k == "total_turns") {
    config.total_turns = parse_int<int>(k, value);
  } else if (k == "monologic_segments") {
    config.monologic_segments = parse_int<int>(k, value);
  } else if (k == "summaries") {
    config.summaries = parse_bool(k, value);
  } else if (k == "prompts_dir") {
    config.prompts_dir = resolve(base_dir, value);
  } else if (k == "output") {
    config.output = unquote(value);
  } else if (k == "jobs") {
    config.jobs = parse_int<int>(k, value);
  } else {
    throw Error(ErrorCode::InvalidConfig, fmt::format("unknown config key '{}'", k));
  }
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("config is not valid JSON: {}", e.what()));
    }
    for (const auto& [key, value] : doc.items()) apply_setting(config, key, json_value_text(value), base_dir);
    return config;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // '#' starts a comment unless it sits inside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("config line {}: expected 'key = value'", line_no));
    }
    apply_setting(config, stripped.substr(0, eq), stripped.substr(eq + 1), base_dir);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::Io, "cannot read config " + path.string());
  }
  return parse_config(text, path.parent_path());
}

void check_config(const ExperimentConfig& config) {
  auto fail = [](std::string message) { throw Error(ErrorCode::InvalidConfig, std::move(message)); };
  if (config.trials < 1) fail("trials must be >= 1");
  if (config.candidates < 2) fail("candidates must be >= 2");
  if (config.budget < 1) fail("budget must be >= 1");
  if (config.jobs < 1) fail("jobs must be >= 1");
  if (config.reprompt_attempts < 1) fail("reprompt_attempts must be >= 1");
  if (config.temperature < 0.0 || config.temperature > 2.0) fail("temperature must be in [0, 2]");
  if (config.max_tokens < 1) fail("max_tokens must be >= 1");
  if ((config.transport == CassetteMode::Replay || config.transport == CassetteMode::Record) && !config.cassette) {
    fail(fmt::format("transport {} needs a cassette path", to_string(config.transport)));
  }
  std::set<std::string> seen;
  for (const auto& l : config.condition_labels()) {
    if (l != kExpertLabel && !strategy_from_label(l)) {
      throw Error(ErrorCode::UnknownStrategy, fmt::format("unknown strategy label '{}'", l));
    }
    if (!seen.insert(l).second) fail(fmt::format("condition '{}' listed twice", l));
  }
  if (config.expert_learner == LearnerKind::Random) fail("expert_learner must be llm or halving");
  SessionConfig session = config.session_config();
  check_session_config(session);
}

ojson to_json(const ExperimentConfig& config) {
  ojson doc;
  if (config.ontology_path) {
    doc["ontology"] = "file";
  } else {
    doc["ontology_seed"] = config.ontology_seed;
    doc["ontology_dims"] = config.ontology_dims;
    doc["ontology_values"] = config.ontology_values;
    doc["ontology_species"] = config.ontology_species;
  }
  doc["strategies"] = config.condition_labels();
  doc["trials"] = config.trials;
  doc["candidates"] = config.candidates;
  doc["budget"] = config.budget;
  doc["seed"] = config.seed;
  doc["transport"] = std::string(to_string(config.transport));
  doc["backend"] = std::string(to_string(config.backend));
  doc["model"] = config.model;
  doc["temperature"] = config.temperature;
  doc["max_tokens"] = config.max_tokens;
  doc["learner"] = std::string(to_string(config.learner));
  doc["expert_learner"] = std::string(to_string(config.expert_learner));
  doc["reprompt_attempts"] = config.reprompt_attempts;
  doc["disclose_candidates"] = config.disclose_candidates;
  doc["total_turns"] = config.total_turns;
  doc["monologic_segments"] = config.monologic_segments;
  doc["summaries"] = config.summaries;
  doc["custom_prompts"] = config.prompts_dir.has_value();
  return doc;
}

std::string config_hash(const ExperimentConfig& config) { return sha256_hex(to_json(config).dump()); }

ExperimentContext prepare_experiment(const ExperimentConfig& config, std::shared_ptr<ChatTransport> backend) {
  check_config(config);
  ExperimentContext context;
  context.config = config;
  Ontology ontology = config.ontology_path
                          ? load_ontology(*config.ontology_path)
                          : generate_procedural(config.ontology_seed, config.ontology_dims, config.ontology_values,
                                                config.ontology_species);
  if (const auto violations = validate(ontology); !violations.empty()) {
    throw Error(ErrorCode::InvalidOntology,
                fmt::format("ontology fails validation: {} ({})", to_string(violations.front().code), violations.front().message));
  }
  if (config.candidates > static_cast<int>(ontology.species.size())) {
    throw Error(ErrorCode::KTooLarge, fmt::format("candidates = {} but the ontology has {} species", config.candidates,
                                                  ontology.species.size()));
  }
  context.ontology = std::make_shared<const Ontology>(std::move(ontology));
  // Paired design: every condition plays the same candidate sets.
  context.candidate_sets = sample_candidate_sets(*context.ontology, config.trials, config.candidates, config.seed);
  context.prompts = config.prompts_dir ? PromptLibrary::with_overrides(*config.prompts_dir) : PromptLibrary::builtin();

  auto make_backend = [&]() -> std::shared_ptr<ChatTransport> {
    if (backend) return backend;
    if (config.backend == BackendKind::Scripted) return std::make_shared<ScriptedChatModel>();
    HttpTransportConfig http;
    http.base_url = config.base_url;
    http.api_key = config.api_key;
    return std::make_shared<HttpChatTransport>(http);
  };
  switch (config.transport) {
    case CassetteMode::Replay:
      context.live_guard = std::make_shared<ForbidLiveTransport>();
      context.cassette = std::make_shared<CassetteTransport>(CassetteMode::Replay, *config.cassette, context.live_guard);
      context.transport = context.cassette;
      break;
    case CassetteMode::Record:
      context.cassette = std::make_shared<CassetteTransport>(CassetteMode::Record, *config.cassette, make_backend());
      context.transport = context.cassette;
      break;
    case CassetteMode::Passthrough:
      context.transport = make_backend();
      break;
  }
  return context;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view label, int trial_index) {
  return derive_seed(derive_seed(master_seed, label), std::to_string(trial_index));
}

std::vector<TrialRecord> read_records(const std::filesystem::path& path) {
  std::vector<TrialRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const bool complete = !in.eof();
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      if (!complete) break;  // torn write at the end of the file
      throw Error(ErrorCode::ParseFailed, fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

void append_record(const std::filesystem::path& path, const TrialRecord& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::Io, "cannot append to " + path.string());
  out << to_json(record).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ConditionResult run_condition(ExperimentContext& context, std::string_view label_view, const RunHooks& hooks) {
  const std::string label(label_view);
  const auto& config = context.config;
  const bool expert = label == kExpertLabel;
  const auto strategy = expert ? std::nullopt : strategy_from_label(label);
  if (!expert && !strategy) throw Error(ErrorCode::UnknownStrategy, fmt::format("unknown strategy label '{}'", label));
  const auto out_dir = config.output;
  std::filesystem::create_directories(out_dir / "records");
  std::filesystem::create_directories(out_dir / "events");

  const LearnerKind learner = expert ? config.expert_learner : config.learner;
  std::string knowledge;
  if (expert) {
    knowledge = expert_knowledge_context(*context.ontology, context.prompts);
  } else {
    knowledge = transcript_to_learner_context(teach(context, *strategy, out_dir));
  }

  const auto records_path = out_dir / "records" / (label + ".jsonl");
  const auto events_path = out_dir / "events" / (label + ".jsonl");
  ConditionResult result;
  result.label = label;
  result.records = read_records(records_path);
  if (static_cast<int>(result.records.size()) > config.trials) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("{} holds {} trials but the config asks for {}", records_path.string(), result.records.size(),
                            config.trials));
  }
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& rec = result.records[i];
    const auto& set = context.candidate_sets[i];
    if (rec.strategy_label != label || rec.trial_index != static_cast<int>(i) || rec.candidate_names != set.candidates ||
        rec.target != set.target) {
      throw Error(ErrorCode::InvalidConfig,
                  fmt::format("{} was written by a different configuration (trial {})", records_path.string(), i));
    }
  }
  // Rewrite both files so a torn tail or events of an unfinished trial are dropped.
  {
    std::string text;
    for (const auto& rec : result.records) text += to_json(rec).dump() + "\n";
    write_text_file(records_path, text);
  }
  for (auto& e : read_events(events_path)) {
    if (e.trial_index < static_cast<int>(result.records.size())) result.events.push_back(std::move(e));
  }
  write_events(events_path, result.events);

  for (int i = static_cast<int>(result.records.size()); i < config.trials; ++i) {
    if (hooks.before_trial) hooks.before_trial(label, i);
    const auto& set = context.candidate_sets[static_cast<std::size_t>(i)];
    TrialState trial(context.ontology, set.candidates, set.target, config.budget,
                     TrialMeta{label, i, trial_seed(config.seed, label, i)});
    TrialRecord record;
    std::vector<LearnerEvent> events;
    switch (learner) {
      case LearnerKind::Halving: record = run_halving_learner(trial); break;
      case LearnerKind::Random: record = run_random_learner(trial, trial.meta().rng_seed); break;
      case LearnerKind::Llm: {
        if (!context.transport) throw Error(ErrorCode::InvalidConfig, "LLM learner needs a chat transport");
        auto played = run_llm_learner(trial, *context.transport, knowledge, config.learner_config(),
                                      config.disclose_candidates, context.prompts);
        record = std::move(played.record);
        events = std::move(played.events);
        break;
      }
    }
    if (!events.empty()) {
      std::ofstream out(events_path, std::ios::binary | std::ios::app);
      for (const auto& e : events) out << to_json(e).dump() << '\n';
      if (!out) throw Error(ErrorCode::Io, "write failed for " + events_path.string());
    }
    append_record(records_path, record);
    result.records.push_back(std::move(record));
    result.events.insert(result.events.end(), events.begin(), events.end());
  }
  result.summary = summarize(result.records);
  return result;
}

std::vector<ConditionResult> run_experiment(ExperimentContext& context, const RunHooks& hooks) {
  const auto labels = context.config.condition_labels();
  const auto& out_dir = context.config.output;
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "ontology.json", serialize(*context.ontology));

  std::vector<ConditionResult> results(labels.size());
  std::vector<std::exception_ptr> errors(labels.size());
  const auto jobs = std::min<std::size_t>(static_cast<std::size_t>(context.config.jobs), labels.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < labels.size(); ++i) results[i] = run_condition(context, labels[i], hooks);
  } else {
    std::mutex mutex;
    std::size_t next = 0;
    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(mutex);
          if (next >= labels.size()) return;
          i = next++;
        }
        try {
          results[i] = run_condition(context, labels[i], hooks);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  emit_report(results, out_dir);
  ManifestInputs inputs;
  inputs.config_hash = config_hash(context.config);
  inputs.ontology_fingerprint = fingerprint(*context.ontology);
  if (context.config.cassette && std::filesystem::exists(*context.config.cassette)) {
    inputs.cassette_fingerprint = sha256_file(*context.config.cassette);
  }
  inputs.conditions = labels;
  write_manifest(out_dir, inputs);
  return results;
}

std::string_view to_string(GroupAxis axis) noexcept { return axis == GroupAxis::Framing ? "FRAMING" : "CONTROL"; }

std::vector<GroupedResult> group_by(const std::vector<ConditionResult>& results, GroupAxis axis) {
  std::vector<std::string> cells;
  if (axis == GroupAxis::Framing) {
    for (auto f : {Framing::TopDown, Framing::BottomUp, Framing::None}) cells.emplace_back(to_string(f));
  } else {
    for (auto c : {Initiative::LearnerQ, Initiative::TeacherQ, Initiative::Monologic}) cells.emplace_back(to_string(c));
  }
  std::vector<GroupedResult> grouped(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) grouped[i].cell = cells[i];
  for (const auto& r : results) {
    const auto id = strategy_from_label(r.label);
    if (!id) throw Error(ErrorCode::UnknownLabel, fmt::format("'{}' has no framing or control cell", r.label));
    const std::string key(axis == GroupAxis::Framing ? to_string(framing(*id)) : to_string(initiative(*id)));
    auto& cell = *std::find_if(grouped.begin(), grouped.end(), [&](const auto& g) { return g.cell == key; });
    cell.labels.push_back(r.label);
    cell.records.insert(cell.records.end(), r.records.begin(), r.records.end());
  }
  std::erase_if(grouped, [](const GroupedResult& g) { return g.records.empty(); });
  for (auto& g : grouped) g.summary = summarize(g.records);
  return grouped;
}

}  // namespace social_gym

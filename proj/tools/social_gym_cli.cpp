// social-gym: command-line entry point.
//
// Exit codes: 0 success, 1 domain error ("CODE: message" on stderr),
// 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "social_gym/agents.hpp"
#include "social_gym/error.hpp"
#include "social_gym/experiment.hpp"
#include "social_gym/game.hpp"
#include "social_gym/hashing.hpp"
#include "social_gym/http_transport.hpp"
#include "social_gym/ontology.hpp"
#include "social_gym/ontology_generation.hpp"
#include "social_gym/pedagogy.hpp"
#include "social_gym/report.hpp"
#include "social_gym/scripted.hpp"
#include "social_gym/strategy.hpp"

namespace fs = std::filesystem;
using namespace social_gym;

namespace {

struct TransportOptions {
  std::string mode = "live";
  std::string cassette;
  std::string backend = "scripted";
  std::string model = "gpt-4o";
  std::string base_url = "https://api.openai.com/v1";
};

void add_transport_options(CLI::App* cmd, TransportOptions& opts) {
  cmd->add_option("--transport", opts.mode, "replay, record or live")
      ->check(CLI::IsMember({"replay", "record", "live"}))
      ->capture_default_str();
  cmd->add_option("--cassette", opts.cassette, "Cassette file for replay/record");
  cmd->add_option("--backend", opts.backend, "Live backend: scripted (offline) or http")
      ->check(CLI::IsMember({"scripted", "http"}))
      ->capture_default_str();
  cmd->add_option("--model", opts.model, "Chat model name")->capture_default_str();
  cmd->add_option("--base-url", opts.base_url, "Chat-completions endpoint prefix")->capture_default_str();
}

std::shared_ptr<ChatTransport> make_transport(const TransportOptions& opts) {
  const auto mode = cassette_mode_from_string(opts.mode);
  if (mode != CassetteMode::Passthrough && opts.cassette.empty()) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("--transport {} needs --cassette", opts.mode));
  }
  if (mode == CassetteMode::Replay) {
    return std::make_shared<CassetteTransport>(mode, opts.cassette, std::make_shared<ForbidLiveTransport>());
  }
  std::shared_ptr<ChatTransport> backend;
  if (opts.backend == "scripted") {
    backend = std::make_shared<ScriptedChatModel>();
  } else {
    HttpTransportConfig http;
    http.base_url = opts.base_url;
    backend = std::make_shared<HttpChatTransport>(http);
  }
  if (mode == CassetteMode::Record) return std::make_shared<CassetteTransport>(mode, opts.cassette, backend);
  return backend;
}

int fail(const Error& e) {
  std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
  return 1;
}

// --- subcommands ------------------------------------------------------------

struct GenOptions {
  std::uint64_t seed = 42;
  int dims = 5;
  int values = 3;
  int species = 10;
  std::string out;
  bool llm = false;
  int attempts = 3;
  TransportOptions transport;
};

int cmd_gen_ontology(const GenOptions& o) {
  Ontology ontology;
  if (o.llm) {
    LlmGenerationConfig config;
    config.model_name = o.transport.model;
    config.species_count = o.species;
    config.values_per_dimension = o.values;
    config.max_attempts = o.attempts;
    // Same dimension names the procedural generator would use.
    config.dimension_names.clear();
    for (const auto& d : generate_procedural(o.seed, o.dims, 2, 1).dimensions) config.dimension_names.push_back(d.name);
    auto transport = make_transport(o.transport);
    ontology = generate_via_llm(*transport, config);
  } else {
    ontology = generate_procedural(o.seed, o.dims, o.values, o.species);
  }
  if (o.out.empty()) {
    std::cout << serialize(ontology);
  } else {
    save_ontology(o.out, ontology);
    std::cout << fmt::format("wrote {} ({} species x {} dimensions)\n", o.out, ontology.species.size(),
                             ontology.dimensions.size());
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const auto ontology = load_ontology(path);
  const auto violations = validate(ontology);
  if (violations.empty()) {
    std::cout << fmt::format("OK: {} species x {} dimensions, fingerprint {}\n", ontology.species.size(),
                             ontology.dimensions.size(), fingerprint(ontology).substr(0, 16));
    return 0;
  }
  for (const auto& v : violations) std::cout << fmt::format("{} {}: {}\n", to_string(v.code), v.location, v.message);
  throw Error(ErrorCode::InvalidOntology, fmt::format("{} violation(s) in {}", violations.size(), path));
}

struct TeachOptions {
  std::string strategy;
  std::string ontology;
  std::string out;
  int turns = 20;
  int segments = 10;
  std::string prompts_dir;
  TransportOptions transport;
};

int cmd_teach(const TeachOptions& o) {
  const auto strategy = parse_strategy(o.strategy);
  const auto ontology = load_ontology(o.ontology);
  SessionConfig session;
  session.total_turns = o.turns;
  session.monologic_segments = o.segments;
  session.model_name = o.transport.model;
  check_session_config(session);
  const auto prompts = o.prompts_dir.empty() ? PromptLibrary::builtin() : PromptLibrary::with_overrides(o.prompts_dir);
  auto transport = make_transport(o.transport);
  LlmSessionAgent teacher(Speaker::Teacher, build_teacher_system_prompt(strategy, ontology, session, prompts), transport,
                          session, prompts);
  LlmSessionAgent learner(Speaker::Learner, build_learner_training_prompt(strategy, prompts), transport, session, prompts);
  const fs::path partial = o.out + ".partial";
  std::optional<Transcript> resume;
  if (fs::exists(partial)) resume = load_transcript(partial);
  Transcript transcript;
  try {
    transcript = run_session(strategy, ontology, teacher, learner, session, resume);
  } catch (const SessionAborted& aborted) {
    save_transcript(partial, aborted.partial());
    std::cerr << fmt::format("checkpoint with {} turns saved to {}\n", aborted.partial().turns.size(), partial.string());
    throw;
  }
  save_transcript(o.out, transcript);
  fs::remove(partial);
  int content = 0, summaries = 0;
  for (const auto& t : transcript.turns) (t.kind == TurnKind::Summary ? summaries : content)++;
  std::cout << fmt::format("wrote {}: {} turns ({} content, {} summaries)\n", o.out, transcript.turns.size(), content,
                           summaries);
  return 0;
}

struct PlayOptions {
  std::string ontology;
  std::string learner = "halving";
  std::string transcript;
  bool expert = false;
  std::uint64_t seed = 0;
  int trial = 0;
  int candidates = kDefaultCandidates;
  int budget = kDefaultBudget;
  bool hide_candidates = false;
  TransportOptions transport;
};

int cmd_play(const PlayOptions& o) {
  auto ontology = std::make_shared<const Ontology>(load_ontology(o.ontology));
  const auto sets = sample_candidate_sets(*ontology, o.trial + 1, o.candidates, o.seed);
  const auto& set = sets.back();
  const std::string label = o.expert ? std::string(kExpertLabel) : (o.transcript.empty() ? "play" : load_transcript(o.transcript).strategy_label);
  TrialState trial(ontology, set.candidates, set.target, o.budget, TrialMeta{label, o.trial, trial_seed(o.seed, label, o.trial)});
  std::cout << fmt::format("trial {} [{} learner, {}]\ncandidates: {}\n", o.trial, o.learner, label,
                           fmt::join(set.candidates, ", "));
  TrialRecord record;
  std::vector<LearnerEvent> events;
  if (o.learner == "halving") {
    record = run_halving_learner(trial);
  } else if (o.learner == "random") {
    record = run_random_learner(trial, trial.meta().rng_seed);
  } else {
    std::string knowledge;
    if (o.expert) {
      knowledge = expert_knowledge_context(*ontology);
    } else if (!o.transcript.empty()) {
      knowledge = transcript_to_learner_context(load_transcript(o.transcript));
    } else {
      throw Error(ErrorCode::InvalidConfig, "the llm learner needs --transcript or --expert");
    }
    auto transport = make_transport(o.transport);
    LlmLearnerConfig config;
    config.model_name = o.transport.model;
    auto played = run_llm_learner(trial, *transport, knowledge, config, !o.hide_candidates);
    record = std::move(played.record);
    events = std::move(played.events);
  }
  for (std::size_t i = 0; i < record.log.size(); ++i) {
    std::cout << fmt::format("Q{}: {} -> {}\n", i + 1, to_string(record.log[i].predicate), to_string(record.log[i].answer));
  }
  for (const auto& e : events) std::cout << fmt::format("event {} after {} questions: {}\n", to_string(e.kind), e.question_number, e.detail);
  std::cout << fmt::format("GUESS: {} (target {}, {})\n", record.final_guess, record.target,
                           record.correct ? "correct" : "wrong");
  std::cout << to_json(record).dump() << "\n";
  return 0;
}

struct ExperimentOptions {
  std::string config;
  std::string output;
  int jobs = 0;
  std::string transport;
  std::string cassette;
  int trials = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> settings;
};

ExperimentConfig resolve_config(const ExperimentOptions& o) {
  auto config = load_config(o.config);
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, fmt::format("--set expects key=value, got '{}'", s));
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.output.empty()) config.output = o.output;
  if (o.jobs > 0) config.jobs = o.jobs;
  if (!o.transport.empty()) apply_setting(config, "transport", o.transport);
  if (!o.cassette.empty()) config.cassette = o.cassette;
  if (o.trials > 0) config.trials = o.trials;
  if (o.seed) config.seed = *o.seed;
  return config;
}

int cmd_experiment(const ExperimentOptions& o) {
  const auto config = resolve_config(o);
  auto context = prepare_experiment(config);
  const auto results = run_experiment(context);
  for (const auto& r : results) {
    std::cout << fmt::format("{:<11} n={:<3} median={:<5} mean={:<7.3f} accuracy={:.3f}\n", r.label, r.summary.n,
                             r.summary.median, r.summary.mean, r.summary.accuracy);
  }
  if (context.live_guard && context.live_guard->attempted_calls() > 0) {
    throw Error(ErrorCode::LiveCallForbidden, "live calls were attempted during replay");
  }
  std::cout << fmt::format("outputs in {}\n", config.output.string());
  return 0;
}

int cmd_report(const std::string& records, std::string out, bool verify) {
  if (out.empty()) out = records;
  const auto results = load_results(records);
  const auto stored = fs::path(out) / "summary.csv";
  if (verify && fs::exists(stored)) verify_summary(results, read_text_file(stored));
  for (const auto& file : emit_report(results, out)) std::cout << (fs::path(out) / file).string() << "\n";
  return 0;
}

int cmd_replay_check(const std::string& config_path, const std::string& cassette, int jobs) {
  auto config = load_config(config_path);
  config.transport = CassetteMode::Replay;
  config.cassette = cassette;
  if (jobs > 0) config.jobs = jobs;
  const auto base = fs::temp_directory_path() /
                    fmt::format("social-gym-replay-{}", std::random_device{}());
  std::vector<std::string> manifests;
  int live_calls = 0;
  for (int run = 0; run < 2; ++run) {
    config.output = base / fmt::format("run{}", run);
    fs::remove_all(config.output);
    auto context = prepare_experiment(config);
    run_experiment(context);
    live_calls += context.live_guard->attempted_calls();
    auto manifest = nlohmann::json::parse(read_text_file(config.output / "manifest.json"));
    manifests.push_back(manifest.dump());
  }
  fs::remove_all(base);
  if (live_calls > 0) throw Error(ErrorCode::LiveCallForbidden, fmt::format("{} live call(s) attempted", live_calls));
  if (manifests[0] != manifests[1]) throw Error(ErrorCode::SummaryMismatch, "replayed runs produced different outputs");
  const auto doc = nlohmann::json::parse(manifests[0]);
  std::cout << fmt::format("replay deterministic: {} output files identical across 2 runs, 0 live calls\n",
                           doc["outputs"].size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AI social gym: teach an alien ontology, then test the learner at 20 Questions"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-ontology", "Generate an ontology (procedural, or via a chat model)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--dims", gen.dims, "Feature dimensions")->capture_default_str();
  gen_cmd->add_option("--values", gen.values, "Values per dimension (2-6)")->capture_default_str();
  gen_cmd->add_option("--species", gen.species, "Species count")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output file (stdout if omitted)");
  gen_cmd->add_flag("--llm", gen.llm, "Ask a chat model instead of the procedural generator");
  gen_cmd->add_option("--attempts", gen.attempts, "Model attempts before giving up")->capture_default_str();
  add_transport_options(gen_cmd, gen.transport);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check an ontology file against every invariant");
  validate_cmd->add_option("ontology", validate_path, "Ontology file")->required();

  TeachOptions teach;
  auto* teach_cmd = app.add_subcommand("teach", "Run one teaching session and save its transcript");
  teach_cmd->add_option("--strategy", teach.strategy, "Strategy label, e.g. Dial-TD-LQ")->required();
  teach_cmd->add_option("--ontology", teach.ontology, "Ontology file")->required();
  teach_cmd->add_option("--out", teach.out, "Transcript output file")->required();
  teach_cmd->add_option("--turns", teach.turns, "Question/answer turns for dialogic strategies")->capture_default_str();
  teach_cmd->add_option("--segments", teach.segments, "Exposition segments for monologic strategies")->capture_default_str();
  teach_cmd->add_option("--prompts-dir", teach.prompts_dir, "Directory of prompt template overrides");
  add_transport_options(teach_cmd, teach.transport);

  PlayOptions play;
  auto* play_cmd = app.add_subcommand("play", "Play one 20 Questions trial, logging every move");
  play_cmd->add_option("--ontology", play.ontology, "Ontology file")->required();
  play_cmd->add_option("--learner", play.learner, "halving, random or llm")
      ->check(CLI::IsMember({"halving", "random", "llm"}))
      ->capture_default_str();
  play_cmd->add_option("--transcript", play.transcript, "Training transcript (llm learner)");
  play_cmd->add_flag("--expert", play.expert, "Give the llm learner the full ontology instead of a transcript");
  play_cmd->add_option("--seed", play.seed, "Master seed for candidate sampling")->capture_default_str();
  play_cmd->add_option("--trial", play.trial, "Trial index within the seeded sequence")->capture_default_str();
  play_cmd->add_option("--candidates", play.candidates, "Candidates per trial")->capture_default_str();
  play_cmd->add_option("--budget", play.budget, "Question budget")->capture_default_str();
  play_cmd->add_flag("--hide-candidates", play.hide_candidates, "Do not show the candidate list to the llm learner");
  add_transport_options(play_cmd, play.transport);

  ExperimentOptions exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run every configured condition and write the report");
  exp_cmd->add_option("--config", exp.config, "Config file (key = value, or JSON)")->required();
  exp_cmd->add_option("--output", exp.output, "Output directory (overrides config)");
  exp_cmd->add_option("--jobs", exp.jobs, "Conditions to run in parallel");
  exp_cmd->add_option("--transport", exp.transport, "replay, record or live")->check(CLI::IsMember({"replay", "record", "live"}));
  exp_cmd->add_option("--cassette", exp.cassette, "Cassette file");
  exp_cmd->add_option("--trials", exp.trials, "Trials per condition");
  exp_cmd->add_option("--seed", exp.seed, "Master seed");
  exp_cmd->add_option("--set", exp.settings, "Override any config key: --set key=value");

  std::string report_records;
  std::string report_out;
  bool report_no_verify = false;
  auto* report_cmd = app.add_subcommand("report", "Regenerate tables and figures from records");
  report_cmd->add_option("--records", report_records, "Experiment output directory or its records/ directory")->required();
  report_cmd->add_option("--out", report_out, "Where to write (defaults to --records)");
  report_cmd->add_flag("--no-verify", report_no_verify, "Skip checking an existing summary.csv against the records");

  std::string check_config_path;
  std::string check_cassette;
  int check_jobs = 0;
  auto* check_cmd = app.add_subcommand("replay-check", "Run a config twice offline and compare outputs");
  check_cmd->add_option("--config", check_config_path, "Config file")->required();
  check_cmd->add_option("--cassette", check_cassette, "Cassette to replay")->required();
  check_cmd->add_option("--jobs", check_jobs, "Conditions to run in parallel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd) return cmd_gen_ontology(gen);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*teach_cmd) return cmd_teach(teach);
    if (*play_cmd) return cmd_play(play);
    if (*exp_cmd) return cmd_experiment(exp);
    if (*report_cmd) return cmd_report(report_records, report_out, !report_no_verify);
    if (*check_cmd) return cmd_replay_check(check_config_path, check_cassette, check_jobs);
  } catch (const Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    std::cerr << "INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

#include "social_gym/scripted.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "social_gym/hashing.hpp"
#include "social_gym/random.hpp"

namespace social_gym {
namespace {

const std::regex& fact_pattern() {
  static const std::regex pattern(R"(([A-Z][A-Za-z-]*)'s ([A-Z][A-Za-z0-9 ]*?) is ([^.?!\n]+)\.)");
  return pattern;
}

const std::regex& asked_pattern() {
  static const std::regex pattern(R"(([A-Z][A-Za-z-]*)'s ([A-Z][A-Za-z0-9 ]*?)(?: might be)?\?)");
  return pattern;
}

std::string fact_sentence(std::string_view species, std::string_view feature, std::string_view value) {
  return fmt::format("{}'s {} is {}.", species, feature, value);
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool contains(std::string_view haystack, std::string_view needle) { return haystack.find(needle) != std::string_view::npos; }

bool mentions_word(std::string_view text, std::string_view word) {
  std::size_t pos = text.find(word);
  while (pos != std::string_view::npos) {
    const bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
    const auto end = pos + word.size();
    const bool right = end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
    if (left && right) return true;
    pos = text.find(word, pos + 1);
  }
  return false;
}

std::string join_or(const std::vector<std::string>& items) {
  if (items.size() <= 1) return items.empty() ? "" : items.front();
  std::string out;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) out += (i > 0 ? ", " : "") + items[i];
  return out + " or " + items.back();
}

// Last statement wins, in order of appearance.
using Beliefs = std::map<std::string, std::map<std::string, std::string>>;

std::optional<Ontology> embedded_ontology(std::string_view text) {
  constexpr std::string_view begin = "BEGIN ONTOLOGY\n";
  constexpr std::string_view end = "\nEND ONTOLOGY";
  const auto b = text.find(begin);
  if (b == std::string_view::npos) return std::nullopt;
  const auto e = text.find(end, b);
  if (e == std::string_view::npos) return std::nullopt;
  try {
    return parse_ontology(text.substr(b + begin.size(), e - b - begin.size()));
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct View {
  std::string system;
  std::vector<const ChatMessage*> dialogue;
  std::string last_user;
  // Segments of the final user message; the instruction comes last.
  std::vector<std::string> last_user_parts;
};

View make_view(const ChatRequest& request) {
  View view;
  for (const auto& m : request.messages) {
    if (m.role == Role::System) {
      view.system = m.content;
    } else {
      view.dialogue.push_back(&m);
      if (m.role == Role::User) view.last_user = m.content;
    }
  }
  std::size_t start = 0;
  for (;;) {
    const auto pos = view.last_user.find("\n\n", start);
    view.last_user_parts.push_back(view.last_user.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 2;
  }
  return view;
}

// Text the other party said right before the instruction, if any.
std::string preceding_part(const View& view) {
  return view.last_user_parts.size() >= 2 ? view.last_user_parts[view.last_user_parts.size() - 2] : "";
}

int match_int(const std::string& text, const std::regex& pattern, int group, int fallback) {
  std::smatch m;
  if (std::regex_search(text, m, pattern)) return std::stoi(m[group].str());
  return fallback;
}

// --- ontology author -------------------------------------------------------

std::string author_ontology(const View& view, Rng& rng) {
  std::string brief;
  for (const auto* m : view.dialogue) {
    if (m->role == Role::User && contains(m->content, "Create a JSON ontology")) {
      brief = m->content;
      break;
    }
  }
  const int species = match_int(brief, std::regex(R"(containing (\d+) alien species)"), 1, 10);
  const int values = match_int(brief, std::regex(R"(exactly (\d+) possible values)"), 1, 3);
  std::vector<std::string> names;
  std::smatch m;
  if (std::regex_search(brief, m, std::regex(R"(categorical features: ([^\n]+)\.)"))) {
    std::string list = m[1].str();
    std::size_t start = 0;
    for (;;) {
      const auto pos = list.find(", ", start);
      names.push_back(trim(list.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 2;
    }
  }
  if (names.empty()) names.assign(std::begin(kDefaultDimensionNames), std::end(kDefaultDimensionNames));
  Ontology ontology;
  try {
    ontology = generate_procedural(rng.next(), static_cast<int>(names.size()), values, species);
  } catch (const Error& e) {
    return fmt::format("I could not build that ontology: {}", e.what());
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string old = ontology.dimensions[i].name;
    if (old == names[i]) continue;
    ontology.dimensions[i].name = names[i];
    for (auto& sp : ontology.species) {
      auto node = sp.features.extract(old);
      node.key() = names[i];
      sp.features.insert(std::move(node));
    }
  }
  ontology.seed.reset();
  return "```json\n" + serialize(ontology) + "```";
}

// --- teacher ---------------------------------------------------------------

struct TeacherStyle {
  Framing framing = Framing::None;
  bool generic_clarification = false;
  bool scaffold = false;
  bool open_ended = false;
  bool hints = false;
};

TeacherStyle teacher_style(std::string_view system) {
  TeacherStyle style;
  if (contains(system, "top-down explanation strategy")) style.framing = Framing::TopDown;
  if (contains(system, "bottom-up strategy")) style.framing = Framing::BottomUp;
  style.generic_clarification = contains(system, "generic clarification");
  style.scaffold = contains(system, "conceptual scaffold") || contains(system, "frame the ontology as described above");
  style.open_ended = contains(system, "open-ended prompts");
  style.hints = contains(system, "guiding questions");
  return style;
}

class Teacher {
 public:
  Teacher(Ontology ontology, const View& view) : ontology_(std::move(ontology)), view_(view), style_(teacher_style(view.system)) {
    for (const auto* m : view.dialogue) {
      if (m->role != Role::Assistant) continue;
      for (const auto& fact : extract_facts(m->content)) {
        if (is_true(fact)) stated_.insert({fact.species, fact.feature});
      }
    }
  }

  std::string respond() {
    std::smatch m;
    if (std::regex_search(view_.last_user, m, std::regex(R"(Deliver part (\d+) of at most (\d+))"))) {
      return exposition(std::stoi(m[1].str()), std::stoi(m[2].str()));
    }
    if (contains(view_.last_user, "Answer the learner's question")) return answer(preceding_part(view_));
    if (std::regex_search(view_.last_user, m, std::regex(R"(targeted question \((\d+) of (\d+)\))"))) {
      return question(std::stoi(m[1].str()));
    }
    return "Let us continue with the lesson.";
  }

 private:
  bool is_true(const StatedFact& fact) const {
    const auto* sp = ontology_.find_species(fact.species);
    if (sp == nullptr) return false;
    const auto it = sp->features.find(fact.feature);
    return it != sp->features.end() && it->second == fact.value;
  }

  std::string fact(const Species& sp, const FeatureDimension& dim) {
    stated_.insert({sp.name, dim.name});
    return fact_sentence(sp.name, dim.name, sp.features.at(dim.name));
  }

  bool stated(const Species& sp, const FeatureDimension& dim) const { return stated_.contains({sp.name, dim.name}); }

  std::string overview(const FeatureDimension& dim) const {
    return fmt::format("{} takes one of: {}.", dim.name, join_or(dim.values));
  }

  // Unstated facts, species-major unless the lesson is organised by feature.
  std::vector<std::pair<const Species*, const FeatureDimension*>> open_facts() const {
    std::vector<std::pair<const Species*, const FeatureDimension*>> out;
    if (style_.framing == Framing::TopDown) {
      for (const auto& dim : ontology_.dimensions)
        for (const auto& sp : ontology_.species)
          if (!stated(sp, dim)) out.emplace_back(&sp, &dim);
    } else {
      for (const auto& sp : ontology_.species)
        for (const auto& dim : ontology_.dimensions)
          if (!stated(sp, dim)) out.emplace_back(&sp, &dim);
    }
    return out;
  }

  std::string exposition(int segment, int segments) {
    const auto n = ontology_.species.size();
    const auto from = n * static_cast<std::size_t>(segment - 1) / static_cast<std::size_t>(segments);
    const auto to = n * static_cast<std::size_t>(segment) / static_cast<std::size_t>(segments);
    std::vector<std::string> out;
    if (style_.framing == Framing::TopDown && segment == 1) {
      out.push_back(fmt::format("The ontology is organised by {} features.", ontology_.dimensions.size()));
      for (const auto& dim : ontology_.dimensions) out.push_back(overview(dim));
    }
    if (from == to) {
      out.push_back("That completes the lesson: every species has now been covered.");
    }
    for (auto i = from; i < to; ++i) {
      const auto& sp = ontology_.species[i];
      if (style_.framing == Framing::BottomUp) out.push_back(fmt::format("Consider {}.", sp.name));
      for (const auto& dim : ontology_.dimensions) out.push_back(fact(sp, dim));
      if (style_.framing == Framing::BottomUp) {
        for (std::size_t j = 0; j < i; ++j) {
          const auto& other = ontology_.species[j];
          const auto shared = std::find_if(ontology_.dimensions.begin(), ontology_.dimensions.end(), [&](const auto& d) {
            return other.features.at(d.name) == sp.features.at(d.name);
          });
          if (shared != ontology_.dimensions.end()) {
            out.push_back(fmt::format("Notice that {} shares its {} with {}.", sp.name, shared->name, other.name));
            break;
          }
        }
      }
    }
    return fmt::format("{}", fmt::join(out, " "));
  }

  std::string answer(const std::string& question) {
    const Species* species = nullptr;
    const FeatureDimension* dimension = nullptr;
    std::smatch m;
    if (std::regex_search(question, m, asked_pattern())) {
      species = ontology_.find_species(m[1].str());
      dimension = ontology_.find_dimension(m[2].str());
    }
    if (species == nullptr) {
      for (const auto& sp : ontology_.species)
        if (mentions_word(question, sp.name)) species = &sp;
    }
    if (dimension == nullptr) {
      for (const auto& dim : ontology_.dimensions)
        if (mentions_word(lower(question), lower(dim.name))) dimension = &dim;
    }
    const auto open = open_facts();
    if (species != nullptr && dimension == nullptr) {
      for (const auto& [sp, dim] : open)
        if (sp == species) dimension = dim;
      if (dimension == nullptr) dimension = &ontology_.dimensions.front();
    }
    if (species == nullptr) {
      // Introduce a species the learner has not heard about yet.
      for (const auto& sp : ontology_.species) {
        const bool fresh = std::none_of(ontology_.dimensions.begin(), ontology_.dimensions.end(),
                                        [&](const auto& d) { return stated(sp, d); });
        if (fresh) {
          species = &sp;
          break;
        }
      }
      if (species == nullptr && !open.empty()) species = open.front().first;
      if (species == nullptr) return "You have now heard about every species and every feature.";
      // Rotate through the features as new species are introduced.
      const auto introduced = std::count_if(ontology_.species.begin(), ontology_.species.end(), [&](const auto& sp) {
        return std::any_of(ontology_.dimensions.begin(), ontology_.dimensions.end(),
                           [&](const auto& d) { return stated(sp, d); });
      });
      const auto dims = ontology_.dimensions.size();
      for (std::size_t k = 0; k < dims; ++k) {
        const auto& dim = ontology_.dimensions[(static_cast<std::size_t>(introduced) + k) % dims];
        if (!stated(*species, dim)) {
          dimension = &dim;
          break;
        }
      }
    }
    std::vector<std::string> out{fact(*species, *dimension)};
    if (style_.generic_clarification) out.push_back("Every species has exactly one value for each feature.");
    if (style_.scaffold && style_.framing == Framing::TopDown) {
      out.push_back(overview(*dimension));
      int extra = 0;
      for (const auto& sp : ontology_.species)
        if (extra < 2 && !stated(sp, *dimension)) {
          out.push_back(fact(sp, *dimension));
          ++extra;
        }
    } else if (style_.scaffold && style_.framing == Framing::BottomUp) {
      int extra = 0;
      for (const auto& dim : ontology_.dimensions)
        if (extra < 2 && !stated(*species, dim)) {
          out.push_back(fact(*species, dim));
          ++extra;
        }
    }
    return fmt::format("{}", fmt::join(out, " "));
  }

  std::string question(int turn) {
    std::vector<std::string> out;
    // Feedback on the learner's previous answer.
    if (turn > 1) {
      const auto reply = preceding_part(view_);
      const auto claims = extract_facts(reply);
      if (!claims.empty()) {
        for (const auto& claim : claims) {
          const auto* sp = ontology_.find_species(claim.species);
          const auto* dim = ontology_.find_dimension(claim.feature);
          if (sp == nullptr || dim == nullptr) continue;
          out.push_back(is_true(claim) ? "Correct: " + fact(*sp, *dim) : "Not quite. " + fact(*sp, *dim));
        }
      } else if (const auto asked = last_question()) {
        out.push_back("Let me tell you: " + fact(*asked->first, *asked->second));
      }
    }
    const auto open = open_facts();
    if (open.empty()) {
      out.push_back("You have heard every fact. Which species do you remember best?");
      return fmt::format("{}", fmt::join(out, " "));
    }
    const auto [species, dimension] = open.front();
    if (style_.scaffold && style_.framing == Framing::TopDown) out.push_back("Remember: " + overview(*dimension));
    if (style_.scaffold && style_.framing == Framing::BottomUp) {
      for (const auto& dim : ontology_.dimensions)
        if (&dim != dimension && !stated(*species, dim)) {
          out.push_back(fmt::format("Consider {}: {}", species->name, fact(*species, dim)));
          break;
        }
    }
    if (style_.hints) {
      for (const auto& [sp, dim] : open)
        if (sp != species || dim != dimension) {
          out.push_back("Hint: " + fact(*sp, *dim));
          break;
        }
    }
    out.push_back(style_.open_ended ? fmt::format("What do you think {}'s {} might be?", species->name, dimension->name)
                                    : fmt::format("What is {}'s {}?", species->name, dimension->name));
    return fmt::format("{}", fmt::join(out, " "));
  }

  std::optional<std::pair<const Species*, const FeatureDimension*>> last_question() const {
    for (auto it = view_.dialogue.rbegin(); it != view_.dialogue.rend(); ++it) {
      if ((*it)->role != Role::Assistant) continue;
      std::smatch m;
      const std::string& text = (*it)->content;
      std::optional<std::pair<const Species*, const FeatureDimension*>> found;
      for (std::sregex_iterator i(text.begin(), text.end(), asked_pattern()), e; i != e; ++i) {
        const auto* sp = ontology_.find_species((*i)[1].str());
        const auto* dim = ontology_.find_dimension((*i)[2].str());
        if (sp != nullptr && dim != nullptr) found = std::make_pair(sp, dim);
      }
      return found;
    }
    return std::nullopt;
  }

  Ontology ontology_;
  const View& view_;
  TeacherStyle style_;
  std::set<std::pair<std::string, std::string>> stated_;
};

// --- training learner ------------------------------------------------------

std::string training_learner(const View& view, Rng& rng) {
  Beliefs beliefs;
  std::vector<std::string> feature_order;
  std::vector<StatedFact> recent;
  for (const auto* m : view.dialogue) {
    for (const auto& fact : extract_facts(m->content)) {
      beliefs[fact.species][fact.feature] = fact.value;
      if (std::find(feature_order.begin(), feature_order.end(), fact.feature) == feature_order.end()) {
        feature_order.push_back(fact.feature);
      }
      recent.push_back(fact);
    }
  }
  const std::string& instruction = view.last_user_parts.back();

  if (contains(instruction, "Summarise")) {
    if (beliefs.empty()) return "I have not learned any specific facts yet.";
    std::size_t count = 0;
    for (const auto& [_, features] : beliefs) count += features.size();
    std::string out = fmt::format("So far I know {} fact{} about {} species.", count, count == 1 ? "" : "s", beliefs.size());
    const auto& last = recent.back();
    out += " Most recently: " + fact_sentence(last.species, last.feature, beliefs[last.species][last.feature]);
    return out;
  }

  if (contains(instruction, "Ask your next question")) {
    std::vector<std::pair<std::string, std::string>> gaps;
    for (const auto& [species, features] : beliefs)
      for (const auto& feature : feature_order)
        if (!features.contains(feature)) gaps.emplace_back(species, feature);
    if (!gaps.empty() && rng.unit() < 0.7) {
      const auto& [species, feature] = gaps[rng.index(gaps.size())];
      return fmt::format("What is {}'s {}?", species, feature);
    }
    return "Which other species should I know about, and what is one of its traits?";
  }

  if (contains(instruction, "Answer the teacher's question")) {
    std::string species;
    std::string feature;
    // The teacher's question may sit behind this learner's own summary.
    for (auto it = view.dialogue.rbegin(); it != view.dialogue.rend() && species.empty(); ++it) {
      if ((*it)->role != Role::User) continue;
      const std::string& asked = (*it)->content;
      for (std::sregex_iterator i(asked.begin(), asked.end(), asked_pattern()), e; i != e; ++i) {
        species = (*i)[1].str();
        feature = (*i)[2].str();
      }
    }
    if (species.empty()) return "I am not sure yet.";
    if (beliefs.contains(species) && beliefs[species].contains(feature)) {
      return fact_sentence(species, feature, beliefs[species][feature]);
    }
    std::vector<std::string> seen;
    for (const auto& [_, features] : beliefs) {
      const auto it = features.find(feature);
      if (it != features.end() && std::find(seen.begin(), seen.end(), it->second) == seen.end()) seen.push_back(it->second);
    }
    std::sort(seen.begin(), seen.end());
    if (seen.empty()) return fmt::format("I do not know {}'s {} yet.", species, feature);
    return "I think " + fact_sentence(species, feature, seen[rng.index(seen.size())]);
  }
  return "Understood.";
}

// --- test learner ----------------------------------------------------------

struct HistoryItem {
  std::string feature;
  std::string value;
  bool yes;
};

std::string loose_question(const std::string& feature, const std::string& value) {
  if (feature == "Habitat") return fmt::format("Does it live in the {}?", lower(value));
  if (feature == "Diet") return fmt::format("Is it a {}?", lower(value));
  return fmt::format("Is its {} {}?", lower(feature), value);
}

std::string test_learner(const View& view, Rng& rng, const ScriptedChatModel::Options& options) {
  Beliefs beliefs;
  std::vector<std::string> feature_order;
  std::map<std::string, std::vector<std::string>> values_seen;
  auto note = [&](const std::string& species, const std::string& feature, const std::string& value) {
    beliefs[species][feature] = value;
    if (std::find(feature_order.begin(), feature_order.end(), feature) == feature_order.end()) feature_order.push_back(feature);
    auto& vs = values_seen[feature];
    if (std::find(vs.begin(), vs.end(), value) == vs.end()) vs.push_back(value);
  };
  if (const auto ontology = embedded_ontology(view.system)) {
    for (const auto& sp : ontology->species)
      for (const auto& dim : ontology->dimensions) note(sp.name, dim.name, sp.features.at(dim.name));
  } else {
    for (const auto& fact : extract_facts(view.system)) note(fact.species, fact.feature, fact.value);
  }

  const std::string turn = view.dialogue.empty() ? "" : view.dialogue.front()->content;
  std::vector<std::string> candidates;
  std::smatch m;
  if (std::regex_search(turn, m, std::regex(R"(Candidates: ([^\n]*))"))) {
    const std::string list = m[1].str();
    if (list != "(not disclosed)") {
      std::size_t start = 0;
      for (;;) {
        const auto pos = list.find(", ", start);
        candidates.push_back(trim(list.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 2;
      }
    }
  }
  if (candidates.empty()) {
    for (const auto& [species, _] : beliefs) candidates.push_back(species);
  }
  if (candidates.empty()) return "I do not know any of these species.";

  std::vector<HistoryItem> history;
  const std::regex history_line(R"((?:^|\n)\d+\. ([^\n]+?) = ([^\n]+?)\? -> (YES|NO))");
  for (std::sregex_iterator i(turn.begin(), turn.end(), history_line), e; i != e; ++i) {
    history.push_back({(*i)[1].str(), (*i)[2].str(), (*i)[3].str() == "YES"});
  }
  const int remaining = match_int(turn, std::regex(R"(Questions remaining: (\d+))"), 1, 0);
  const bool first_attempt = view.dialogue.size() == 1;

  auto known = [&](const std::string& species, const std::string& feature) -> const std::string* {
    const auto s = beliefs.find(species);
    if (s == beliefs.end()) return nullptr;
    const auto f = s->second.find(feature);
    return f == s->second.end() ? nullptr : &f->second;
  };
  std::vector<std::string> consistent;
  for (const auto& c : candidates) {
    const bool ok = std::all_of(history.begin(), history.end(), [&](const HistoryItem& h) {
      const auto* v = known(c, h.feature);
      return v == nullptr || (*v == h.value) == h.yes;
    });
    if (ok) consistent.push_back(c);
  }
  if (consistent.empty()) consistent = candidates;

  const double draw = rng.unit();
  auto guess = [&](const std::string& species) {
    if (first_attempt && draw < options.loose_phrasing_rate) return fmt::format("I am confident now. My guess is {}.", species);
    return "GUESS: " + species;
  };
  if (first_attempt && draw > 1.0 - options.unusable_reply_rate) {
    return "Let me think about which feature would split the remaining candidates best.";
  }
  if (consistent.size() == 1 || remaining <= 0) return guess(consistent[rng.index(consistent.size())]);

  std::optional<std::pair<std::string, std::string>> best;
  std::size_t best_worst = consistent.size();
  for (const auto& feature : feature_order) {
    for (const auto& value : values_seen[feature]) {
      const bool asked = std::any_of(history.begin(), history.end(),
                                     [&](const HistoryItem& h) { return h.feature == feature && h.value == value; });
      if (asked) continue;
      std::size_t yes = 0, no = 0, unknown = 0;
      for (const auto& c : consistent) {
        const auto* v = known(c, feature);
        if (v == nullptr) ++unknown;
        else if (*v == value) ++yes;
        else ++no;
      }
      if (yes == 0 || no == 0) continue;
      const auto worst = std::max(yes, no) + unknown;
      if (worst < best_worst) {
        best_worst = worst;
        best = std::make_pair(feature, value);
      }
    }
  }
  if (!best) return guess(consistent[rng.index(consistent.size())]);
  if (first_attempt && draw < options.loose_phrasing_rate) return loose_question(best->first, best->second);
  return fmt::format("QUESTION: {} = {}?", best->first, best->second);
}

}  // namespace

std::vector<StatedFact> extract_facts(std::string_view text) {
  std::vector<StatedFact> out;
  const std::string owned(text);
  for (std::sregex_iterator i(owned.begin(), owned.end(), fact_pattern()), e; i != e; ++i) {
    out.push_back({(*i)[1].str(), trim((*i)[2].str()), trim((*i)[3].str())});
  }
  return out;
}

ChatResponse ScriptedChatModel::complete(const ChatRequest& request) {
  check_request(request);
  ++calls_;
  Rng rng(derive_seed(0, canonicalize_and_hash(request)));
  const View view = make_view(request);
  std::string text;
  const bool authoring = std::any_of(view.dialogue.begin(), view.dialogue.end(), [](const ChatMessage* m) {
    return m->role == Role::User && contains(m->content, "Create a JSON ontology");
  });
  if (authoring) {
    text = author_ontology(view, rng);
  } else if (contains(view.system, "20 Questions")) {
    text = test_learner(view, rng, options_);
  } else if (contains(view.system, "BEGIN ONTOLOGY")) {
    if (auto ontology = embedded_ontology(view.system)) {
      text = Teacher(std::move(*ontology), view).respond();
    } else {
      text = "I cannot read the ontology I was given.";
    }
  } else if (contains(view.system, "You are a learner")) {
    text = training_learner(view, rng);
  } else {
    text = "I am not sure how to help with that.";
  }
  ChatResponse response;
  response.text = std::move(text);
  response.usage.completion_tokens = static_cast<int>(response.text.size() / 4);
  for (const auto& m : request.messages) response.usage.prompt_tokens += static_cast<int>(m.content.size() / 4);
  response.usage.total_tokens = response.usage.prompt_tokens + response.usage.completion_tokens;
  return response;
}

ScriptedSession make_scripted_session(StrategyId strategy, const Ontology& ontology, const SessionConfig& config) {
  ScriptedSession session;
  session.model = std::make_shared<ScriptedChatModel>();
  session.teacher = std::make_unique<LlmSessionAgent>(Speaker::Teacher, build_teacher_system_prompt(strategy, ontology, config),
                                                      session.model, config);
  session.learner =
      std::make_unique<LlmSessionAgent>(Speaker::Learner, build_learner_training_prompt(strategy), session.model, config);
  return session;
}

}  // namespace social_gym

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "social_gym/agents.hpp"

namespace social_gym {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool iequals(std::string_view a, std::string_view b) { return a.size() == b.size() && lower(a) == lower(b); }

// Strip markdown emphasis and quoting that models like to wrap lines in.
std::string clean_line(std::string_view line) {
  std::string out = trim(line);
  auto strip = [](char c) { return c == '*' || c == '`' || c == '_' || c == '>' || c == '"'; };
  while (!out.empty() && strip(out.front())) out.erase(out.begin());
  while (!out.empty() && strip(out.back())) out.pop_back();
  return trim(out);
}

// Exact match first, then a unique case-insensitive match.
template <typename Range, typename Key>
std::optional<std::string> resolve_label(const Range& labels, std::string_view wanted, Key key) {
  for (const auto& item : labels) {
    if (key(item) == wanted) return std::string(key(item));
  }
  std::optional<std::string> found;
  for (const auto& item : labels) {
    if (iequals(key(item), wanted)) {
      if (found) return std::nullopt;
      found = std::string(key(item));
    }
  }
  return found;
}

std::optional<std::string> resolve_species(const Ontology& ontology, std::string_view name) {
  return resolve_label(ontology.species, name, [](const Species& s) -> std::string_view { return s.name; });
}

// Whole-word, case-insensitive occurrence. A trailing plural "s"/"es" is
// tolerated so "acid bogs" still mentions "Acid bog".
std::vector<std::size_t> find_mentions(const std::string& haystack_lower, const std::string& needle_lower,
                                       std::size_t& matched_length) {
  std::vector<std::size_t> hits;
  if (needle_lower.empty()) return hits;
  std::size_t pos = haystack_lower.find(needle_lower);
  while (pos != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(haystack_lower[pos - 1]);
    std::size_t end = pos + needle_lower.size();
    if (end < haystack_lower.size() && haystack_lower.compare(end, 2, "es") == 0 &&
        (end + 2 == haystack_lower.size() || !is_word_char(haystack_lower[end + 2]))) {
      end += 2;
    } else if (end < haystack_lower.size() && haystack_lower[end] == 's' &&
               (end + 1 == haystack_lower.size() || !is_word_char(haystack_lower[end + 1]))) {
      end += 1;
    }
    const bool right_ok = end == haystack_lower.size() || !is_word_char(haystack_lower[end]);
    if (left_ok && right_ok) {
      hits.push_back(pos);
      matched_length = end - pos;
    }
    pos = haystack_lower.find(needle_lower, pos + 1);
  }
  return hits;
}

constexpr std::string_view kAuxiliaries[] = {"is",    "are",   "does", "do",     "did",   "can",  "could", "has",
                                             "have",  "will",  "would", "was",   "were",  "should", "might", "may",
                                             "isn't", "doesn't", "lives", "eats"};
constexpr std::string_view kFillers[] = {"so", "ok", "okay", "then", "and", "alright", "next", "hmm", "well",
                                         "question", "my", "next question", "first"};

std::string first_word(std::string_view sentence_lower, std::size_t& offset) {
  std::size_t i = offset;
  while (i < sentence_lower.size() && !std::isalpha(static_cast<unsigned char>(sentence_lower[i]))) ++i;
  std::size_t j = i;
  while (j < sentence_lower.size() &&
         (std::isalpha(static_cast<unsigned char>(sentence_lower[j])) || sentence_lower[j] == '\'')) {
    ++j;
  }
  offset = j;
  return std::string(sentence_lower.substr(i, j - i));
}

bool is_yes_no_shaped(std::string_view sentence_lower) {
  std::size_t offset = 0;
  for (int guard = 0; guard < 4; ++guard) {
    const auto word = first_word(sentence_lower, offset);
    if (word.empty()) return false;
    if (std::find(std::begin(kAuxiliaries), std::end(kAuxiliaries), word) != std::end(kAuxiliaries)) return true;
    if (std::find(std::begin(kFillers), std::end(kFillers), word) == std::end(kFillers)) return false;
  }
  return false;
}

struct Sentence {
  std::string text;
  bool question_mark = false;
};

// "i.e." and friends do not end a sentence.
bool ends_with_abbreviation(const std::string& text) {
  static const std::array<std::string_view, 5> kAbbreviations = {"i.e", "e.g", "etc", "vs", "approx"};
  const auto start = text.find_last_of(" \t(,") == std::string::npos ? 0 : text.find_last_of(" \t(,") + 1;
  std::string word = text.substr(start);
  std::transform(word.begin(), word.end(), word.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  std::string current;
  auto flush = [&](bool qm) {
    auto t = trim(current);
    if (!t.empty()) out.push_back({std::move(t), qm});
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '?') {
      flush(true);
    } else if (c == '\n' || c == '!' ||
               (c == '.' && (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))) &&
                !ends_with_abbreviation(current))) {
      flush(false);
    } else {
      current.push_back(c);
    }
  }
  flush(false);
  return out;
}

struct Mention {
  std::size_t pos;
  std::size_t length;
  const FeatureDimension* dimension;
  const std::string* value;
};

ParsedUtterance lenient_question(const Sentence& sentence, const Ontology& ontology, bool& is_candidate) {
  const auto text_lower = lower(sentence.text);
  is_candidate = is_yes_no_shaped(text_lower);
  if (!is_candidate) return ParseFailure{ParseFailureReason::NotYesNo, sentence.text};

  std::vector<Mention> mentions;
  for (const auto& dim : ontology.dimensions) {
    for (const auto& value : dim.values) {
      std::size_t length = 0;
      for (auto pos : find_mentions(text_lower, lower(value), length)) mentions.push_back({pos, length, &dim, &value});
    }
  }
  // A mention nested inside a longer one ("bog" inside "acid bog") yields to it.
  std::erase_if(mentions, [&](const Mention& m) {
    return std::any_of(mentions.begin(), mentions.end(), [&](const Mention& other) {
      return &other != &m && other.length > m.length && other.pos <= m.pos && m.pos + m.length <= other.pos + other.length;
    });
  });
  std::set<std::pair<std::string, std::string>> distinct;
  for (const auto& m : mentions) distinct.emplace(m.dimension->name, *m.value);
  if (distinct.size() > 1) {
    // Prefer values whose dimension is named in the sentence.
    std::set<std::pair<std::string, std::string>> named;
    for (const auto& pv : distinct) {
      std::size_t ignored = 0;
      if (!find_mentions(text_lower, lower(pv.first), ignored).empty()) named.insert(pv);
    }
    if (named.size() == 1) distinct = named;
  }
  if (distinct.empty()) return ParseFailure{ParseFailureReason::NoFeatureMention, sentence.text};
  if (distinct.size() > 1) {
    std::vector<std::string> labels;
    for (const auto& [d, v] : distinct) labels.push_back(d + "=" + v);
    return ParseFailure{ParseFailureReason::Ambiguous, fmt::format("{}", fmt::join(labels, ", "))};
  }
  const auto& [dim, value] = *distinct.begin();
  return Question{FreeTextQuestion{sentence.text, Predicate{dim, value}}};
}

std::optional<std::string> lenient_guess(std::string_view text, const Ontology& ontology) {
  const auto text_lower = lower(text);
  std::size_t ignored = 0;
  const bool guess_intent = !find_mentions(text_lower, "guess", ignored).empty() ||
                            text_lower.find("final answer") != std::string::npos ||
                            text_lower.find("the target is") != std::string::npos;
  if (!guess_intent) return std::nullopt;
  std::optional<std::string> found;
  for (const auto& sp : ontology.species) {
    std::size_t length = 0;
    if (!find_mentions(text_lower, lower(sp.name), length).empty()) {
      if (found) return std::nullopt;
      found = sp.name;
    }
  }
  return found;
}

ParsedUtterance parse_strict_question(std::string_view body, const Ontology& ontology) {
  std::string rest = trim(body);
  while (!rest.empty() && (rest.back() == '?' || rest.back() == '.')) rest.pop_back();
  const auto eq = rest.find('=');
  const auto dim_text = trim(std::string_view(rest).substr(0, eq));
  const auto value_text = trim(std::string_view(rest).substr(eq + 1));
  const auto dim_name = resolve_label(ontology.dimensions, dim_text,
                                      [](const FeatureDimension& d) -> std::string_view { return d.name; });
  if (!dim_name) return ParseFailure{ParseFailureReason::UnknownDimension, dim_text};
  const auto* dim = ontology.find_dimension(*dim_name);
  const auto value = resolve_label(dim->values, value_text, [](const std::string& v) -> std::string_view { return v; });
  if (!value) return ParseFailure{ParseFailureReason::ValueOutOfDomain, fmt::format("{} = {}", *dim_name, value_text)};
  return Question{Predicate{*dim_name, *value}};
}

bool starts_with_keyword(std::string_view line, std::string_view keyword, std::string_view& body) {
  if (line.size() < keyword.size() || !iequals(line.substr(0, keyword.size()), keyword)) return false;
  body = line.substr(keyword.size());
  return true;
}

}  // namespace

std::string_view to_string(ParseFailureReason reason) noexcept {
  switch (reason) {
    case ParseFailureReason::Empty: return "EMPTY";
    case ParseFailureReason::NotYesNo: return "NOT_YES_NO";
    case ParseFailureReason::NoFeatureMention: return "NO_FEATURE_MENTION";
    case ParseFailureReason::Ambiguous: return "AMBIGUOUS";
    case ParseFailureReason::Compound: return "COMPOUND";
    case ParseFailureReason::UnknownDimension: return "UNKNOWN_DIMENSION";
    case ParseFailureReason::ValueOutOfDomain: return "VALUE_OUT_OF_DOMAIN";
    case ParseFailureReason::UnknownSpecies: return "UNKNOWN_SPECIES";
  }
  return "EMPTY";
}

ParsedUtterance parse_learner_utterance(std::string_view text, const Ontology& ontology) {
  if (trim(text).empty()) return ParseFailure{ParseFailureReason::Empty, ""};

  // Strict directives.
  std::vector<ParsedUtterance> directives;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    const auto line = clean_line(text.substr(start, end - start));
    std::string_view body;
    if (starts_with_keyword(line, "QUESTION:", body)) {
      if (body.find('=') != std::string_view::npos) {
        directives.push_back(parse_strict_question(body, ontology));
      } else {
        // "QUESTION: does it live in the acid bog?" -> lenient on the body.
        bool candidate = false;
        auto sentences = split_sentences(body);
        if (sentences.empty()) {
          directives.push_back(ParseFailure{ParseFailureReason::NotYesNo, std::string(line)});
        } else {
          directives.push_back(lenient_question(sentences.front(), ontology, candidate));
        }
      }
    } else if (starts_with_keyword(line, "GUESS:", body)) {
      std::string name = trim(body);
      while (!name.empty() && (name.back() == '.' || name.back() == '!')) name.pop_back();
      if (auto species = resolve_species(ontology, trim(name))) {
        directives.push_back(Guess{*species});
      } else {
        directives.push_back(ParseFailure{ParseFailureReason::UnknownSpecies, trim(name)});
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  if (directives.size() > 1) {
    return ParseFailure{ParseFailureReason::Compound, fmt::format("{} directives in one reply", directives.size())};
  }
  if (directives.size() == 1) return directives.front();

  // Lenient pass.
  std::optional<ParsedUtterance> found;
  std::optional<ParseFailure> first_failure;
  for (const auto& sentence : split_sentences(text)) {
    bool candidate = false;
    auto parsed = lenient_question(sentence, ontology, candidate);
    if (!candidate) continue;
    if (std::holds_alternative<ParseFailure>(parsed)) {
      if (!first_failure) first_failure = std::get<ParseFailure>(parsed);
      continue;
    }
    if (found) {
      const auto& a = std::get<FreeTextQuestion>(std::get<Question>(*found)).parsed;
      const auto& b = std::get<FreeTextQuestion>(std::get<Question>(parsed)).parsed;
      if (a != b) return ParseFailure{ParseFailureReason::Compound, "several feature questions in one reply"};
      continue;
    }
    found = std::move(parsed);
  }
  if (found) {
    // Keep the whole reply as the raw text.
    auto& q = std::get<FreeTextQuestion>(std::get<Question>(*found));
    q.raw = trim(text);
    return *found;
  }
  if (auto species = lenient_guess(text, ontology)) return Guess{*species};
  if (first_failure) return *first_failure;
  return ParseFailure{ParseFailureReason::NotYesNo, trim(text)};
}

}  // namespace social_gym

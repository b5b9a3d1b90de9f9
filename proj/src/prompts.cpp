#include "social_gym/prompts.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "social_gym/error.hpp"

namespace social_gym {

// Generated at configure time from prompts/*.txt.
std::map<std::string, std::string> builtin_prompt_files();

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

std::string render_template(std::string_view text, const TemplateValues& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{' && i + 1 < text.size() && is_ident_start(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      if (j < text.size() && text[j] == '}') {
        const auto name = text.substr(i + 1, j - i - 1);
        const auto it = values.find(name);
        if (it == values.end()) {
          throw Error(ErrorCode::TemplateError, fmt::format("no value for placeholder '{{{}}}'", name));
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string strip_trailing_newlines(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

const PromptLibrary& PromptLibrary::builtin() {
  static const PromptLibrary library = [] {
    PromptLibrary lib;
    for (auto& [name, text] : builtin_prompt_files()) lib.templates_.emplace(name, strip_trailing_newlines(text));
    return lib;
  }();
  return library;
}

PromptLibrary PromptLibrary::with_overrides(const std::filesystem::path& directory) {
  PromptLibrary lib = builtin();
  if (!std::filesystem::is_directory(directory)) {
    throw Error(ErrorCode::Io, fmt::format("prompt directory '{}' not found", directory.string()));
  }
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    lib.templates_[entry.path().stem().string()] = strip_trailing_newlines(buffer.str());
  }
  return lib;
}

const std::string& PromptLibrary::get(std::string_view name) const {
  const auto it = templates_.find(name);
  if (it == templates_.end()) throw Error(ErrorCode::TemplateError, fmt::format("no prompt template '{}'", name));
  return it->second;
}

std::string PromptLibrary::render(std::string_view name, const TemplateValues& values) const {
  return render_template(get(name), values);
}

}  // namespace social_gym

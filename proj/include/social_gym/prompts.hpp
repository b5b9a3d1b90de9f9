#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace social_gym {

using TemplateValues = std::map<std::string, std::string, std::less<>>;

// Single-pass substitution of `{name}` placeholders, where name matches
// [a-z_][a-z0-9_]*. Any other brace is literal text, and substituted values
// are never rescanned. Throws Error(TemplateError) for a placeholder with no
// value.
std::string render_template(std::string_view text, const TemplateValues& values);

// Prompt templates by file stem ("teacher_system", ...). The built-in set is
// compiled from the prompts/ directory; a directory override replaces any
// template it provides.
class PromptLibrary {
 public:
  static const PromptLibrary& builtin();
  static PromptLibrary with_overrides(const std::filesystem::path& directory);

  // Throws Error(TemplateError) for an unknown name.
  const std::string& get(std::string_view name) const;
  std::string render(std::string_view name, const TemplateValues& values) const;

  const std::map<std::string, std::string, std::less<>>& templates() const noexcept { return templates_; }

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

// Trailing newlines of the template files are not part of the prompt.
std::string strip_trailing_newlines(std::string text);

}  // namespace social_gym

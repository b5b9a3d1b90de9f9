#include <fstream>

#include <gtest/gtest.h>

#include "social_gym/prompts.hpp"
#include "test_support.hpp"

namespace social_gym {
namespace {

using testing::TempDir;

TEST(Template, SubstitutesPlaceholders) {
  EXPECT_EQ(render_template("Hi {name}, {name}!", {{"name", "Ada"}}), "Hi Ada, Ada!");
}

TEST(Template, LeavesOtherBracesAlone) {
  EXPECT_EQ(render_template("{\"a\": 1} {} {Upper} {1x}", {}), "{\"a\": 1} {} {Upper} {1x}");
}

TEST(Template, ValuesAreNotRescanned) {
  EXPECT_EQ(render_template("{a}", {{"a", "{b}"}, {"b", "x"}}), "{b}");
}

TEST(Template, MissingValueThrows) {
  EXPECT_ERROR_CODE(render_template("Hello {who}", {}), ErrorCode::TemplateError);
}

TEST(Library, BuiltinHasCoreTemplates) {
  const auto& lib = PromptLibrary::builtin();
  for (const char* name : {"teacher_system", "learner_test_system", "learner_test_turn", "learner_format_reminder",
                           "ontology_generation", "ontology_generation_repair", "learner_training_system"}) {
    EXPECT_NO_THROW(lib.get(name)) << name;
    EXPECT_FALSE(lib.get(name).empty());
    EXPECT_NE(lib.get(name).back(), '\n');
  }
  EXPECT_ERROR_CODE(lib.get("nope"), ErrorCode::TemplateError);
}

TEST(Library, DirectoryOverridesReplaceOnlyProvidedFiles) {
  TempDir dir;
  std::ofstream(dir / "learner_format_reminder.txt") << "Fix it: {reason}\n\n";
  std::ofstream(dir / "ignored.md") << "not a template";
  const auto lib = PromptLibrary::with_overrides(dir.path());
  EXPECT_EQ(lib.render("learner_format_reminder", {{"reason", "bad"}}), "Fix it: bad");
  EXPECT_EQ(lib.get("teacher_system"), PromptLibrary::builtin().get("teacher_system"));
  EXPECT_ERROR_CODE(lib.get("ignored"), ErrorCode::TemplateError);
  EXPECT_ERROR_CODE(PromptLibrary::with_overrides(dir / "missing"), ErrorCode::Io);
}

TEST(Library, StripTrailingNewlines) {
  EXPECT_EQ(strip_trailing_newlines("a\n\r\n"), "a");
  EXPECT_EQ(strip_trailing_newlines("a\nb"), "a\nb");
}

}  // namespace
}  // namespace social_gym

#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "social_gym/error.hpp"
#include "social_gym/ontology.hpp"

namespace social_gym::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(SOCIAL_GYM_FIXTURES) / name; }

inline std::shared_ptr<const Ontology> zorblax() {
  static const auto ontology = std::make_shared<const Ontology>(load_ontology(fixture("zorblax_ontology.json")));
  return ontology;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("social_gym_test_" + std::to_string(std::random_device{}()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace social_gym::testing

#define EXPECT_ERROR_CODE(statement, expected)                              \
  do {                                                                      \
    try {                                                                   \
      statement;                                                            \
      ADD_FAILURE() << "expected " << ::social_gym::to_string(expected);    \
    } catch (const ::social_gym::Error& error__) {                          \
      EXPECT_EQ(error__.code(), expected) << error__.what();                \
    }                                                                       \
  } while (false)

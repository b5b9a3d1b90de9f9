#pragma once

#include <string>
#include <vector>

#include "social_gym/ontology.hpp"
#include "social_gym/prompts.hpp"
#include "social_gym/transport.hpp"

namespace social_gym {

struct LlmGenerationConfig {
  std::string model_name = "gpt-4o";
  int species_count = 10;
  std::vector<std::string> dimension_names{std::begin(kDefaultDimensionNames), std::end(kDefaultDimensionNames)};
  int values_per_dimension = 3;
  // Model replies before giving up (the first request plus repair requests).
  int max_attempts = 3;
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;
};

// Pulls the JSON object out of a model reply: a ```json fence if present,
// otherwise the outermost {...}. Throws Error(ParseFailed).
std::string extract_json_object(std::string_view reply);

// Asks the model for an ontology and feeds validation problems back until it
// produces one that validates and has the requested shape. Throws
// Error(ParseFailed) when no reply parses, Error(SchemaMismatch) when the last
// parsed reply still violates invariants; transport errors propagate.
Ontology generate_via_llm(ChatTransport& transport, const LlmGenerationConfig& config = {},
                          const PromptLibrary& prompts = PromptLibrary::builtin());

}  // namespace social_gym

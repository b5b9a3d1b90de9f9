#include "social_gym/ontology_generation.hpp"

#include <fmt/format.h>

#include "social_gym/error.hpp"

namespace social_gym {

std::string extract_json_object(std::string_view reply) {
  const auto fence = reply.find("```");
  if (fence != std::string_view::npos) {
    const auto body = reply.find('\n', fence);
    const auto close = body == std::string_view::npos ? body : reply.find("```", body);
    if (close != std::string_view::npos) {
      const auto inner = reply.substr(body + 1, close - body - 1);
      if (inner.find('{') != std::string_view::npos) return trim(inner);
    }
  }
  const auto open = reply.find('{');
  const auto close = reply.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw Error(ErrorCode::ParseFailed, "reply contains no JSON object");
  }
  return std::string(reply.substr(open, close - open + 1));
}

Ontology generate_via_llm(ChatTransport& transport, const LlmGenerationConfig& config, const PromptLibrary& prompts) {
  if (config.species_count < 1 || config.dimension_names.empty() || config.values_per_dimension < 2) {
    throw Error(ErrorCode::InvalidConfig, "ontology generation needs species, dimensions and at least 2 values");
  }
  ChatRequest request;
  request.model_name = config.model_name;
  request.temperature = config.temperature;
  request.max_tokens = config.max_tokens;
  request.messages.push_back(
      {Role::User, prompts.render("ontology_generation",
                                  {{"species_count", std::to_string(config.species_count)},
                                   {"dimension_count", std::to_string(config.dimension_names.size())},
                                   {"dimension_list", fmt::format("{}", fmt::join(config.dimension_names, ", "))},
                                   {"values_per_dimension", std::to_string(config.values_per_dimension)}})});

  std::optional<std::vector<Violation>> last_violations;
  std::string last_parse_error;
  const int attempts = std::max(1, config.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    const std::string reply = transport.complete(request).text;
    std::string problems;
    try {
      Ontology ontology = parse_ontology(extract_json_object(reply));
      auto violations = validate(ontology);
      auto shape = check_shape(ontology, static_cast<std::size_t>(config.species_count), config.dimension_names);
      violations.insert(violations.end(), shape.begin(), shape.end());
      if (violations.empty()) return ontology;
      std::vector<std::string> lines;
      for (const auto& v : violations) lines.push_back(fmt::format("{} at {}: {}", to_string(v.code), v.location, v.message));
      problems = fmt::format("{}", fmt::join(lines, "; "));
      last_violations = std::move(violations);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseFailed) throw;
      last_parse_error = e.what();
      problems = fmt::format("it is not a JSON ontology ({})", e.what());
    }
    request.messages.push_back({Role::Assistant, reply});
    request.messages.push_back({Role::User, prompts.render("ontology_generation_repair", {{"problems", problems}})});
  }
  if (last_violations) {
    std::vector<std::string> codes;
    for (const auto& v : *last_violations) codes.push_back(fmt::format("{} ({})", to_string(v.code), v.message));
    throw Error(ErrorCode::SchemaMismatch,
                fmt::format("generated ontology still invalid after {} attempts: {}", attempts, fmt::join(codes, "; ")));
  }
  throw Error(ErrorCode::ParseFailed,
              fmt::format("no parsable ontology after {} attempts: {}", attempts, last_parse_error));
}

}  // namespace social_gym

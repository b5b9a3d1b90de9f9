#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace social_gym {

// Machine-readable failure codes. Every error raised by the library carries
// one of these; the CLI prints the name verbatim.
enum class ErrorCode {
  // ontology
  Infeasible,
  ParseFailed,
  SchemaMismatch,
  InvalidOntology,
  UnknownSpecies,
  UnknownDimension,
  // game
  KTooLarge,
  InvalidPredicate,
  BudgetExhausted,
  WrongPhase,
  UnknownCandidate,
  NoInformativePredicate,
  // pedagogy
  UnknownStrategy,
  InvalidTranscript,
  TemplateError,
  // transport
  InvalidRequest,
  TransportTimeout,
  RateLimited,
  ReplayMiss,
  AuthMissing,
  HttpError,
  BadResponse,
  LiveCallForbidden,
  // experiment
  EmptyRecords,
  UnknownLabel,
  InvalidConfig,
  SummaryMismatch,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace social_gym

#include "social_gym/error.hpp"

namespace social_gym {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Infeasible: return "INFEASIBLE";
    case ErrorCode::ParseFailed: return "PARSE_FAILED";
    case ErrorCode::SchemaMismatch: return "SCHEMA_MISMATCH";
    case ErrorCode::InvalidOntology: return "INVALID_ONTOLOGY";
    case ErrorCode::UnknownSpecies: return "UNKNOWN_SPECIES";
    case ErrorCode::UnknownDimension: return "UNKNOWN_DIMENSION";
    case ErrorCode::KTooLarge: return "K_TOO_LARGE";
    case ErrorCode::InvalidPredicate: return "INVALID_PREDICATE";
    case ErrorCode::BudgetExhausted: return "BUDGET_EXHAUSTED";
    case ErrorCode::WrongPhase: return "WRONG_PHASE";
    case ErrorCode::UnknownCandidate: return "UNKNOWN_CANDIDATE";
    case ErrorCode::NoInformativePredicate: return "NO_INFORMATIVE_PREDICATE";
    case ErrorCode::UnknownStrategy: return "UNKNOWN_STRATEGY";
    case ErrorCode::InvalidTranscript: return "INVALID_TRANSCRIPT";
    case ErrorCode::TemplateError: return "TEMPLATE_ERROR";
    case ErrorCode::InvalidRequest: return "INVALID_REQUEST";
    case ErrorCode::TransportTimeout: return "TRANSPORT_TIMEOUT";
    case ErrorCode::RateLimited: return "RATE_LIMITED";
    case ErrorCode::ReplayMiss: return "REPLAY_MISS";
    case ErrorCode::AuthMissing: return "AUTH_MISSING";
    case ErrorCode::HttpError: return "HTTP_ERROR";
    case ErrorCode::BadResponse: return "BAD_RESPONSE";
    case ErrorCode::LiveCallForbidden: return "LIVE_CALL_FORBIDDEN";
    case ErrorCode::EmptyRecords: return "EMPTY_RECORDS";
    case ErrorCode::UnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::SummaryMismatch: return "SUMMARY_MISMATCH";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace social_gym

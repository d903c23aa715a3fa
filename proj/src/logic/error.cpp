#include "hg/error.hpp"

namespace hg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IllFormed: return "IllFormed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UndeclaredIdentifier: return "UndeclaredIdentifier";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::RuleNotApplicable: return "RuleNotApplicable";
    case ErrorCode::FreshnessViolation: return "FreshnessViolation";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnknownSchema: return "UnknownSchema";
    case ErrorCode::MissingMetavariable: return "MissingMetavariable";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::ScopeExceedsCeiling: return "ScopeExceedsCeiling";
    case ErrorCode::UnsupportedFormula: return "UnsupportedFormula";
    case ErrorCode::ForkNotInterpretable: return "ForkNotInterpretable";
    case ErrorCode::UnknownGoal: return "UnknownGoal";
    case ErrorCode::IllFormedSpec: return "IllFormedSpec";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEngine: return "UnknownEngine";
    case ErrorCode::ActionNotApplicable: return "ActionNotApplicable";
    case ErrorCode::EngineFailure: return "EngineFailure";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::ReplayDivergence: return "ReplayDivergence";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ParseError::ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected)
    : Error(ErrorCode::ParseError, message), span_(span), expected_(std::move(expected)) {}

ReplayDivergence::ReplayDivergence(std::size_t seq, const std::string& detail)
    : Error(ErrorCode::ReplayDivergence,
            "replay diverged at record " + std::to_string(seq) + ": " + detail),
      seq_(seq) {}

EngineFailure::EngineFailure(std::string engine_id, const std::string& detail)
    : Error(ErrorCode::EngineFailure, "engine " + engine_id + ": " + detail),
      engine_id_(std::move(engine_id)) {}

}  // namespace hg

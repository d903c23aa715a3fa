#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hg {

enum class ErrorCode {
  IllFormed,
  ParseError,
  DuplicateName,
  UndeclaredIdentifier,
  UnknownLanguage,
  UnknownRule,
  RuleNotApplicable,
  FreshnessViolation,
  ArityMismatch,
  UnknownSchema,
  MissingMetavariable,
  BadParameter,
  ScopeExceedsCeiling,
  UnsupportedFormula,
  ForkNotInterpretable,
  UnknownGoal,
  IllFormedSpec,
  UnknownNode,
  UnknownEngine,
  ActionNotApplicable,
  EngineFailure,
  ValidationFailed,
  ReplayDivergence,
  IoError,
  VersionMismatch,
  DigestMismatch,
  BadConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct SourceSpan {
  std::size_t start = 0;  // byte offsets, half-open
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected = {});

  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

// Raised when a replayed record no longer produces the recorded outcome.
class ReplayDivergence : public Error {
 public:
  ReplayDivergence(std::size_t seq, const std::string& detail);

  std::size_t seq() const { return seq_; }

 private:
  std::size_t seq_;
};

class EngineFailure : public Error {
 public:
  EngineFailure(std::string engine_id, const std::string& detail);

  const std::string& engine_id() const { return engine_id_; }

 private:
  std::string engine_id_;
};

}  // namespace hg

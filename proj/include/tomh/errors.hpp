#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tomh {

enum class ErrorKind {
  // backend
  AuthError,
  RateLimited,
  Timeout,
  ProtocolError,
  EmptyChoice,
  NoFixture,
  // parsing
  MissingAnswer,
  DuplicateAnswer,
  MissingScore,
  ScoreOutOfRange,
  NonIntegerScore,
  // protocol / templates
  MissingSlot,
  UnexpectedSlot,
  TemplateNotFound,
  // stats
  DegenerateVariance,
  SampleTooSmall,
  Separation,
  RankDeficient,
  MissingClass,
  DomainError,
  EmptyText,
  // analysis
  TooFewRecords,
  AllNoncompliant,
  ContextBudgetExceeded,
  // store / cli
  IoError,
  SchemaMismatch,
  ConfigError,
  UsageError,
};

const char* to_string(ErrorKind kind);

class HarnessError : public std::runtime_error {
 public:
  HarnessError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the affected question numbers so callers can report
// every problem at once instead of the first one hit.
class ParseError : public HarnessError {
 public:
  ParseError(ErrorKind kind, const std::string& message, std::vector<int> questions)
      : HarnessError(kind, message), questions_(std::move(questions)) {}

  const std::vector<int>& questions() const { return questions_; }

 private:
  std::vector<int> questions_;
};

}  // namespace tomh

#include "tomh/errors.hpp"

namespace tomh {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AuthError: return "AuthError";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::ProtocolError: return "ProtocolError";
    case ErrorKind::EmptyChoice: return "EmptyChoice";
    case ErrorKind::NoFixture: return "NoFixture";
    case ErrorKind::MissingAnswer: return "MissingAnswer";
    case ErrorKind::DuplicateAnswer: return "DuplicateAnswer";
    case ErrorKind::MissingScore: return "MissingScore";
    case ErrorKind::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorKind::NonIntegerScore: return "NonIntegerScore";
    case ErrorKind::MissingSlot: return "MissingSlot";
    case ErrorKind::UnexpectedSlot: return "UnexpectedSlot";
    case ErrorKind::TemplateNotFound: return "TemplateNotFound";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::Separation: return "Separation";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::MissingClass: return "MissingClass";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::TooFewRecords: return "TooFewRecords";
    case ErrorKind::AllNoncompliant: return "AllNoncompliant";
    case ErrorKind::ContextBudgetExceeded: return "ContextBudgetExceeded";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace tomh

#pragma once

#include <stdexcept>
#include <string>

namespace coevo {

enum class ErrorCode {
  // instance parsing
  MalformedHeader,
  TruncatedJobLine,
  TrailingTokens,
  MachineIdOutOfRange,
  NonPositiveTime,
  EmptyMachineSet,
  InvalidInstance,
  // schedule / genetics
  InfeasibleChromosome,
  EmptyGeneSet,
  NotDistributed,
  // expressions and generation
  UnboundTerminal,
  GrammarError,
  BoundsExceeded,
  MissingThought,
  NonFiniteProbe,
  GenerationExhausted,
  // engine / bench
  ConfigInvalid,
  NonPositiveLB,
  InstanceNotFound,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Input-file errors carry the 1-based line number they were detected on.
class ParseError : public Error {
public:
  ParseError(ErrorCode code, int line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedJobLine: return "TruncatedJobLine";
    case ErrorCode::TrailingTokens: return "TrailingTokens";
    case ErrorCode::MachineIdOutOfRange: return "MachineIdOutOfRange";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::EmptyMachineSet: return "EmptyMachineSet";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::InfeasibleChromosome: return "InfeasibleChromosome";
    case ErrorCode::EmptyGeneSet: return "EmptyGeneSet";
    case ErrorCode::NotDistributed: return "NotDistributed";
    case ErrorCode::UnboundTerminal: return "UnboundTerminal";
    case ErrorCode::GrammarError: return "GrammarError";
    case ErrorCode::BoundsExceeded: return "BoundsExceeded";
    case ErrorCode::MissingThought: return "MissingThought";
    case ErrorCode::NonFiniteProbe: return "NonFiniteProbe";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::NonPositiveLB: return "NonPositiveLB";
    case ErrorCode::InstanceNotFound: return "InstanceNotFound";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace coevo

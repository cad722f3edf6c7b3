#pragma once

#include <stdexcept>
#include <string>

namespace qbo {

// Single exception type for the whole library; the code mirrors the error
// vocabulary of the module contracts so callers can dispatch without string
// matching.
class Error : public std::runtime_error {
 public:
  enum class Code {
    LevelTooLarge,
    ValidationFailed,
    WordOutOfRange,
    DimensionMismatch,
    UnboundedVariable,
    FamilyViolation,
    EnumerationTooLarge,
    NonIntegralSupport,
    CapExceeded,
    InvalidPOVM,
    NotAState,
    UnsupportedStructure,
    ParseError,
    IOFailure,
    BackendFailure,
  };

  Error(Code code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

const char* to_string(Error::Code c);

}  // namespace qbo

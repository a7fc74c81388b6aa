#pragma once

#include <stdexcept>
#include <string>

namespace hrng {

enum class ErrorCode {
    // crypto
    InvalidThreshold,
    FieldTooSmall,
    InsufficientShares,
    DuplicateShareIndex,
    InvalidShareIndex,
    EmptyAggregation,
    InsufficientEntropyLength,
    OutputTooWide,
    // pool
    DuplicateEntry,
    PhaseViolation,
    AccessDenied,
    UnknownEntry,
    // protocol
    InvalidConfig,
    InvalidAdversary,
    RoundFailed,
    InsufficientPool,
    // gas
    InvalidArity,
    // io
    ParseError,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

} // namespace hrng

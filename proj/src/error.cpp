#include "hrng/error.hpp"

namespace hrng {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::InsufficientShares: return "InsufficientShares";
    case ErrorCode::DuplicateShareIndex: return "DuplicateShareIndex";
    case ErrorCode::InvalidShareIndex: return "InvalidShareIndex";
    case ErrorCode::EmptyAggregation: return "EmptyAggregation";
    case ErrorCode::InsufficientEntropyLength: return "InsufficientEntropyLength";
    case ErrorCode::OutputTooWide: return "OutputTooWide";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::PhaseViolation: return "PhaseViolation";
    case ErrorCode::AccessDenied: return "AccessDenied";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidAdversary: return "InvalidAdversary";
    case ErrorCode::RoundFailed: return "RoundFailed";
    case ErrorCode::InsufficientPool: return "InsufficientPool";
    case ErrorCode::InvalidArity: return "InvalidArity";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace hrng

#include "hrng/phase.hpp"

#include "hrng/error.hpp"

namespace hrng {

const char* to_string(Phase p) {
    switch (p) {
    case Phase::Setup:
        return "SETUP";
    case Phase::Publish:
        return "PUBLISH";
    case Phase::Request:
        return "REQUEST";
    case Phase::Respond:
        return "RESPOND";
    case Phase::Construct:
        return "CONSTRUCT";
    }
    return "?";
}

Phase phase_from_string(const std::string& s) {
    if (s == "SETUP") {
        return Phase::Setup;
    }
    if (s == "PUBLISH") {
        return Phase::Publish;
    }
    if (s == "REQUEST") {
        return Phase::Request;
    }
    if (s == "RESPOND") {
        return Phase::Respond;
    }
    if (s == "CONSTRUCT") {
        return Phase::Construct;
    }
    throw Error(ErrorCode::ParseError, "unknown phase: " + s);
}

} // namespace hrng

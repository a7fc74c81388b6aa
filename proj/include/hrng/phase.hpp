#pragma once

#include <string>

namespace hrng {

// Round phases in strict execution order; a later phase never starts before
// the previous one has fully finished.
enum class Phase {
    Setup = 0,
    Publish = 1,
    Request = 2,
    Respond = 3,
    Construct = 4,
};

const char* to_string(Phase p);
Phase phase_from_string(const std::string& s);

} // namespace hrng

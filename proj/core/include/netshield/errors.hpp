#pragma once

#include <stdexcept>
#include <string>

namespace netshield {

// Error taxonomy mirrored by the CLI exit codes: input errors exit 2,
// precondition violations (disconnected base network, oversized oracle
// input) exit 3, comparison mismatches exit 4, internal assertion
// failures exit 5.

struct InputError : std::runtime_error {
    enum class Kind { Syntax, Semantic };
    Kind kind;
    InputError(Kind k, const std::string& msg)
        : std::runtime_error(std::string(k == Kind::Syntax ? "syntax error: " : "semantic error: ") + msg),
          kind(k) {}
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace netshield

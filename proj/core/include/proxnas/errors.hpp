#pragma once

#include <stdexcept>
#include <string>

namespace proxnas {

// Error taxonomy. The CLI maps each type to a category-prefixed message
// and a nonzero exit code; library callers can catch the types directly.

// A caller broke an operation's precondition (shape mismatch, bad range).
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computation produced or encountered a non-finite value.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File or directory could not be read, parsed, or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config document is syntactically or semantically invalid.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad command-line invocation.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace proxnas

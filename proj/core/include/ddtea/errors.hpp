#pragma once

#include <stdexcept>

namespace ddtea {

/// Text-format syntax error; the message carries line/field diagnostics.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally well-formed input that violates a semantic invariant.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ddtea

#pragma once

#include <stdexcept>
#include <string>

namespace see {

/// Bad or missing configuration input (maps to process exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters outside the admissible regime of an evaluator (exit code 3).
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace see

#pragma once

#include <stdexcept>
#include <string>

namespace eldp {

inline constexpr const char* kSchemaVersion = "eldp.v1";

// Thrown when a computation would exceed its configured state/bit budget.
// Callers map this to a dedicated process exit code.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an operation is asked for a regime its method cannot cover
// (e.g. truncated-DP moment computation with a positive exponent).
struct unsupported_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace eldp

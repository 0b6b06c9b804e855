#pragma once

#include <stdexcept>

namespace stcca {

// Matrix/tensor extents incompatible with an operation (includes mode/index
// range violations and arity errors).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scalar parameter out of its admissible range (k, beta, fractions, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data: non-finite values, ragged files,
// label range violations, mismatched sample counts.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run-configuration schema violation (unknown keys, weight sums, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input rank-deficient where a factorization needs full column rank.
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear-algebra failure that survived retries.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stcca

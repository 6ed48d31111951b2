// errors.hpp -- error taxonomy shared by all modules.
//
// The CLI maps these onto exit codes: capacity_error -> 3, input_error and
// every other precondition failure -> 2. Threshold failures are not
// exceptions; commands report them through their return value.
#pragma once

#include <stdexcept>
#include <string>

namespace chainbal {

struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched sizes between arguments (coloring vs. ground set, matrix shapes).
struct dimension_error : error {
  using error::error;
};

// Request exceeds a hard enumeration/representation cap.
struct capacity_error : error {
  using error::error;
};

// Argument outside the mathematical domain of the operation.
struct domain_error : error {
  using error::error;
};

// Internal invariant broke mid-run; indicates a caller or implementation bug.
struct state_error : error {
  using error::error;
};

// The requested object provably does not exist for this input.
struct infeasible_error : error {
  using error::error;
};

// Malformed combinatorial structure (missing source/sink, broken layering).
struct structure_error : error {
  using error::error;
};

// Unparseable or schema-violating external input.
struct input_error : error {
  using error::error;
};

}  // namespace chainbal

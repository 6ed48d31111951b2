// gap_filler.hpp -- ordering a block of elements without leaving [-1, 1].
//
// Given a base set S with |f(S)| <= 1 and a disjoint block I with
// |f(S u I)| <= 1, some ordering of I keeps every intermediate prefix
// within 1; the greedy rule below finds one deterministically. The
// exhaustive oracle searches all orderings and is the independent check.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chainbal/core.hpp"

namespace chainbal {

struct GapInstance {
  const BalancedColoring* f;  // labels over the ambient ground set
  Mask base;                  // S
  Mask block;                 // I, disjoint from S
};

// Greedy ordering of the block: at prefix imbalance 0 take the
// smallest-index remaining element; at +-1 take the smallest-index element
// of the correcting sign. Validates the instance, asserts the sign-count
// identity at every step (state_error on violation: caller bug).
std::vector<int> greedy_order(const GapInstance& inst);

// Same rule for the builder's large-n path: elements with labels from f,
// starting prefix imbalance h0. Returns the ordering; state_error if the
// counting identity ever breaks.
std::vector<int> greedy_order_span(const BalancedColoring& f, int h0,
                                   std::span<const int> elements);

// First ordering (in lexicographic element order) keeping all prefixes
// within 1, found by backtracking; |I| <= 12 (capacity_error above).
// Does not validate the endpoint invariants: negative controls probe
// instances that violate them, and absence is then the correct answer.
std::optional<std::vector<int>> exhaustive_order_oracle(const GapInstance& inst);

constexpr int kMaxOracleBlock = 12;

}  // namespace chainbal

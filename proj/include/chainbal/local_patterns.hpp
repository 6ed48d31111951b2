// local_patterns.hpp -- the pattern family a steered scale can leave behind.
//
// On a split segment, a pattern is: solid consumed prefixes of both halves
// (lengths a, b), plus any subset of the "gap region" reaching out to
// (a', b'), with grid travel (a'-a)+(b'-b) within the budget
// transition_coeff * ln m + base_threshold. Composites nest these across
// shrinking sub-segments. Mask-based routines require segment length <= 32;
// the builder's large-n verification never materializes masks.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainbal/bigint.hpp"
#include "chainbal/constants.hpp"
#include "chainbal/core.hpp"
#include "chainbal/steered_path.hpp"

namespace chainbal {

struct LocalPattern {
  Segment seg;
  GridPosition from;  // solid prefix lengths (a, b)
  GridPosition to;    // gap region ends (a', b')
  Mask gap_subset;    // absolute element mask, subset of the gap region

  std::int64_t travel() const { return (to.a - from.a) + (to.b - from.b); }
  Mask mask() const;  // prefix pair plus gap subset
};

Mask segment_mask(const Segment& seg);

// Exact number of (from, to, subset) triples within budget.
BigUint local_pattern_count(const Segment& seg, const ConstantsProfile& p);

// Minimal-budget witness: peel the largest solid prefixes, then take the
// smallest gap ends covering the leftovers; if that violates the budget no
// witness exists. A must be contained in the segment (dimension_error).
std::optional<LocalPattern> local_membership(Mask A, const Segment& seg,
                                             const ConstantsProfile& p);

// Distinct member sets of the family (segment length <= 32 required, and
// total tuple work capped).
std::vector<Mask> local_pattern_masks(const Segment& seg, const ConstantsProfile& p,
                                      std::uint64_t work_cap = 50'000'000);

// Depth-stamped composite witness: nested segments plus the forced split
// of x along them.
struct CompositeWitness {
  std::vector<Segment> segments;  // I_0 superset ... superset I_J
  int depth() const { return static_cast<int>(segments.size()) - 1; }
};

std::optional<CompositeWitness> composite_membership(Mask x, int n,
                                                     const ConstantsProfile& p);

// Every composite over [n]; n <= 16, work-capped (capacity_error carries
// the analytic bound when exceeded).
SetSystem enumerate_composites(int n, const ConstantsProfile& p,
                               std::uint64_t work_cap = 100'000'000);

// (depth_limit + 1) * n^(6 + 3 * pattern_exponent).
BigUint composite_count_bound(std::int64_t n, const ConstantsProfile& p);

}  // namespace chainbal

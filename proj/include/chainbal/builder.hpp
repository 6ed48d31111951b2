// builder.hpp -- multiscale construction of a 1-balanced maximal chain.
//
// The builder processes the ground set in scales. Each scale steers a path
// through a contiguous segment until one half is exhausted, records the
// balanced visits (|H| <= 1), reorders each inter-visit gap with the greedy
// filler, and hands the unconsumed residual to the next scale. A residual
// smaller than base_threshold is absorbed into one final greedy block.
// Probabilistic bounds are audited at runtime; a breached bound declares
// failure (a recorded outcome, never an exception) and leaves the chain
// truncated at the last completed block.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainbal/constants.hpp"
#include "chainbal/core.hpp"
#include "chainbal/steered_path.hpp"

namespace chainbal {

enum class FailureReason {
  none,
  height,          // |H| exceeded 1 + height_coeff * ln m' within a scale
  gap,             // anchor-to-anchor (or tail) run exceeded gap_coeff * ln m'
  deviation,       // residual longer than 4 * sqrt(m' ln m')
  shrinkage,       // residual cubed exceeds the parent segment squared
  residual_slack,  // 8 * residual^3 < (m')^2: next scale too small to descend in
  descent,         // first balanced visit took more than descent_coeff * h0 steps
  depth,           // recursion would exceed the nesting depth limit
  invariant,       // effective size fell below base_threshold / 2
};

const char* to_string(FailureReason r);

struct ScaleRecord {
  Segment seg;
  int h_in = 0;                  // chain imbalance entering the segment
  SteeredTrace path;             // steered consumption of seg from (0, 0)
  std::int64_t descent_len = 0;  // steps before the first balanced visit
  GridPosition start_grid;       // grid when the descent ends (a0, b0)
  std::int64_t effective_size = 0;  // seg.len - a0 - b0 (m')

  // Balanced visits from the first one on, as grid positions and as levels
  // of the final chain. The slice chain.order[anchor_levels[i],
  // anchor_levels[i+1]) is gap block i after greedy reordering; the slice
  // ending at anchor_levels[0] is the inbound transition block.
  std::vector<GridPosition> anchor_grids;
  std::vector<std::int64_t> anchor_levels;

  GridPosition exhaust_grid;
  int h_out = 0;  // imbalance at exhaustion, signed
  std::int64_t tail_len = 0;
  Segment residual;
  bool base_case = false;

  // Audit observations and the numeric bounds they were held to.
  std::int64_t max_height = 0;  // max |H| from the first anchor on
  std::int64_t max_gap = 0;     // max inter-anchor distance, tail included
  double height_bound = 0.0;
  double gap_bound = 0.0;
  double residual_bound = 0.0;
};

struct BuilderTrace {
  int n = 0;
  bool success = false;
  FailureReason reason = FailureReason::none;
  int failure_scale = -1;  // scale index at the first breached audit
  bool hypotheses_ok = true;
  std::vector<ScaleRecord> scales;
  MaximalChain chain;  // complete iff success; truncated after a failure
};

// Runs the strategy on one coloring. rng drives the steering coins only.
BuilderTrace build_chain(const BalancedColoring& f, const ConstantsProfile& profile,
                         Rng& rng);

struct Verdict {
  bool pass = false;
  std::string breach;  // first violated condition; empty on pass

  explicit operator bool() const { return pass; }
};

// Independent validation of a finished trace: the chain must be a maximal
// chain with every prefix imbalance <= 1, and every level must decompose as
// frozen per-scale patterns plus a terminal in-budget pattern over nested,
// shrinking segments (depth-limited, pairwise disjoint, exactly covering
// the level). Walks the chain once; does not consult the steered paths.
Verdict verify_trace(const BuilderTrace& trace, const BalancedColoring& f,
                     const ConstantsProfile& profile);

// One summary row per trial for the experiment harness.
struct BuildOutcome {
  std::uint64_t trial = 0;
  bool success = false;
  bool verified = false;
  FailureReason reason = FailureReason::none;
  int scales = 0;
  std::int64_t max_height = 0;
  std::int64_t max_gap = 0;
};

}  // namespace chainbal

// steered_path.hpp -- imbalance-steered consumption of a split segment.
//
// A segment of the ground set is split into a left and right half (odd
// lengths put the extra element on the left). The path repeatedly extends
// whichever half's next element keeps |H| smallest, flipping a coin on
// ties, and stops once one half is exhausted. Coin flips come from a
// dedicated source so a trace is reproducible from (seed, coloring) alone.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainbal/core.hpp"
#include "chainbal/rational.hpp"
#include "chainbal/rng.hpp"

namespace chainbal {

struct Segment {
  int start = 0;  // first element, 0-based, inclusive
  int len = 0;

  int left_size() const { return (len + 1) / 2; }
  int right_size() const { return len / 2; }
  int split() const { return start + left_size(); }  // first element of right half
  int left_elem(int i) const { return start + i; }
  int right_elem(int i) const { return split() + i; }
  int end() const { return start + len; }
  bool contains(const Segment& o) const {
    return o.start >= start && o.end() <= end();
  }
};

struct GridPosition {
  int a = 0;  // consumed prefix length of the left half
  int b = 0;
  friend bool operator==(GridPosition x, GridPosition y) {
    return x.a == y.a && x.b == y.b;
  }
};

struct CoinSource {
  virtual ~CoinSource() = default;
  virtual bool pick_right() = 0;  // true -> extend the right half
};

struct RngCoin final : CoinSource {
  explicit RngCoin(Rng& rng) : rng_(&rng) {}
  bool pick_right() override { return rng_->coin(); }

 private:
  Rng* rng_;
};

// Fixed outcome script for tests; throws state_error when exhausted.
struct ScriptedCoin final : CoinSource {
  explicit ScriptedCoin(std::vector<bool> outcomes) : outcomes_(std::move(outcomes)) {}
  bool pick_right() override;
  std::size_t used() const { return next_; }

 private:
  std::vector<bool> outcomes_;
  std::size_t next_ = 0;
};

struct SteeredStep {
  std::int8_t block;        // 0 = left, 1 = right
  std::int8_t fvalue;       // revealed label of the consumed element
  bool coin_used;
  std::int32_t imbalance_after;   // H(t)
  std::int32_t deviation_after;   // D(t) = (a - a0) - (b - b0)
  std::int64_t pool_after;        // unconsumed elements of the ambient ground set
};

struct SteeredTrace {
  Segment seg;
  GridPosition start;
  int h0 = 0;
  std::int64_t pool0 = 0;
  std::vector<SteeredStep> steps;
  // Indices t in [0, steps.size()] with |H(t)| <= 1; H(0) = h0.
  std::vector<std::int64_t> balanced_visits;
  std::optional<std::int64_t> exhaustion_step;
  GridPosition end;
  int h_end = 0;

  int imbalance_at(std::int64_t t) const {
    return t == 0 ? h0 : steps[static_cast<std::size_t>(t - 1)].imbalance_after;
  }
  int element_consumed(std::int64_t t, GridPosition pos_before) const {
    const SteeredStep& s = steps[static_cast<std::size_t>(t - 1)];
    return s.block == 0 ? seg.left_elem(pos_before.a) : seg.right_elem(pos_before.b);
  }
};

struct SteerResult {
  GridPosition pos;
  int imbalance;
  SteeredStep step;
};

// One extension from `pos`. Both halves exhausted -> state_error.
SteerResult steer_step(const Segment& seg, GridPosition pos, int imbalance,
                       std::int64_t pool_before, const BalancedColoring& f,
                       CoinSource& coins);

// Run from `start` until one half is exhausted. pool0 = unconsumed elements
// of the ambient ground set at the starting position (the segment itself
// when nothing outside it remains unconsumed).
SteeredTrace run_segment(const Segment& seg, GridPosition start, int h0,
                         std::int64_t pool0, const BalancedColoring& f,
                         CoinSource& coins);

// Contiguous remainder of the unexhausted half; zero-length when both
// halves emptied together. state_error when no half is exhausted.
Segment residual_of(const SteeredTrace& trace);

// P(P-1)/(R(R-1)) with P = (R-h)/2: the chance that both next candidates
// carry the sign of the current imbalance when h >= 1. Zero when P <= 1.
Rat64 forced_probability(std::int64_t pool, int h);

}  // namespace chainbal

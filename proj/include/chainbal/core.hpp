// core.hpp -- ground sets, colorings, set systems, chains.
//
// Sets over [n] are uint32_t bitmasks (element i <-> bit i, 0-based
// internally; serialization is 1-based). Brute-force operations are capped
// at n <= 20 and |X| <= 2^20 and fail with capacity_error beyond that.
#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chainbal/errors.hpp"
#include "chainbal/rational.hpp"
#include "chainbal/rng.hpp"

namespace chainbal {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }
inline Mask full_mask(int n) { return n == 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

constexpr int kMaxBruteForceGround = 20;
constexpr std::size_t kMaxBruteForceSets = std::size_t{1} << 20;

struct GroundSize {
  int n;
  explicit GroundSize(int n_) : n(n_) {
    if (n < 2 || n % 2 != 0) throw domain_error("ground size must be even and >= 2");
  }
};

// +/-1 labels with zero sum.
class BalancedColoring {
 public:
  explicit BalancedColoring(std::vector<signed char> values);

  int n() const { return static_cast<int>(values_.size()); }
  int at(int element) const { return values_[element]; }
  const std::vector<signed char>& values() const { return values_; }

  // Sum of labels over the masked subset (n <= 32 only).
  int imbalance(Mask subset) const;

 private:
  std::vector<signed char> values_;
};

int imbalance(const BalancedColoring& f, Mask subset);

// Lexicographic enumeration of all C(n, n/2) balanced colorings, indexable
// so that parallel consumers can partition the index range.
class BalancedColoringRange {
 public:
  explicit BalancedColoringRange(GroundSize g);
  std::uint64_t count() const { return count_; }
  BalancedColoring at(std::uint64_t index) const;

 private:
  int n_;
  std::uint64_t count_;
};

std::uint64_t binomial(int n, int k);  // throws capacity_error on u64 overflow

BalancedColoring random_balanced_coloring(GroundSize g, Rng& rng);

struct MaximalChain {
  // order[i] = element added at level i+1; prefixes give the chain sets.
  std::vector<int> order;
  Mask set_at(int level) const {  // level in [0, n]
    Mask m = 0;
    for (int i = 0; i < level; ++i) m |= Mask{1} << order[i];
    return m;
  }
};

class SetSystem {
 public:
  SetSystem(int n, std::vector<Mask> sets);  // dedups, sorts, validates range

  int n() const { return n_; }
  const std::vector<Mask>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool contains(Mask m) const { return lookup_.count(m) != 0; }

 private:
  int n_;
  std::vector<Mask> sets_;
  std::unordered_set<Mask> lookup_;
};

// Max level imbalance along a chain: max_i |f(C_i)|.
int chain_cost(const MaximalChain& chain, const BalancedColoring& f);

// Min-max DP over the inclusion lattice of X. Ties at equal cost break
// toward the lexicographically smallest added element. Absent when X holds
// no maximal chain.
std::optional<std::pair<MaximalChain, int>> best_chain_for(const SetSystem& X,
                                                           const BalancedColoring& f);

// max_f min_chain chain_cost; infeasible_error when X has no maximal chain.
int chain_balance(const SetSystem& X);

// Exact fraction of balanced colorings admitting a chain with every level
// imbalance <= k. Reported unreduced: num = witnesses, den = C(n, n/2).
Fraction average_case_epsilon(const SetSystem& X, int k);

}  // namespace chainbal

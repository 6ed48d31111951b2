#include "chainbal/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace chainbal {

BalancedColoring::BalancedColoring(std::vector<signed char> values)
    : values_(std::move(values)) {
  if (values_.empty() || values_.size() % 2 != 0)
    throw domain_error("coloring length must be even and positive");
  long long sum = 0;
  for (signed char v : values_) {
    if (v != 1 && v != -1) throw domain_error("coloring labels must be +1/-1");
    sum += v;
  }
  if (sum != 0) throw domain_error("coloring labels must sum to zero");
}

int BalancedColoring::imbalance(Mask subset) const {
  int s = 0;
  for (Mask m = subset; m != 0; m &= m - 1)
    s += values_[__builtin_ctz(m)];
  return s;
}

int imbalance(const BalancedColoring& f, Mask subset) {
  if (popcount(subset) > 0 && 32 - __builtin_clz(subset) > f.n())
    throw dimension_error("subset exceeds coloring ground set");
  return f.imbalance(subset);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    // r * num / i is always integral; divide by gcd first to delay overflow.
    std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    std::uint64_t ri = r / g;
    std::uint64_t di = static_cast<std::uint64_t>(i) / g;
    std::uint64_t nd = num / di;
    if (num % di != 0) throw state_error("binomial reduction failed");
    if (ri > std::numeric_limits<std::uint64_t>::max() / nd)
      throw capacity_error("binomial overflows 64 bits");
    r = ri * nd;
  }
  return r;
}

BalancedColoringRange::BalancedColoringRange(GroundSize g) : n_(g.n) {
  if (n_ > kMaxBruteForceGround)
    throw capacity_error("coloring enumeration capped at n <= 20");
  count_ = binomial(n_, n_ / 2);
}

BalancedColoring BalancedColoringRange::at(std::uint64_t index) const {
  if (index >= count_) throw domain_error("coloring index out of range");
  // Combinatorial number system: choose positions of the +1 labels in
  // lexicographic order of position sets.
  std::vector<signed char> vals(n_, -1);
  int remaining = n_ / 2;
  std::uint64_t idx = index;
  for (int pos = 0; pos < n_ && remaining > 0; ++pos) {
    std::uint64_t with_here = binomial(n_ - pos - 1, remaining - 1);
    if (idx < with_here) {
      vals[pos] = 1;
      --remaining;
    } else {
      idx -= with_here;
    }
  }
  return BalancedColoring(std::move(vals));
}

BalancedColoring random_balanced_coloring(GroundSize g, Rng& rng) {
  std::vector<signed char> vals(g.n);
  for (int i = 0; i < g.n; ++i) vals[i] = i < g.n / 2 ? 1 : -1;
  rng.shuffle(vals);
  return BalancedColoring(std::move(vals));
}

SetSystem::SetSystem(int n, std::vector<Mask> sets) : n_(n), sets_(std::move(sets)) {
  if (n < 1 || n > 32) throw domain_error("set system ground size out of range");
  for (Mask m : sets_) {
    if ((m & ~full_mask(n)) != 0)
      throw dimension_error("set contains element outside ground set");
  }
  std::sort(sets_.begin(), sets_.end());
  sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
  lookup_.insert(sets_.begin(), sets_.end());
}

int chain_cost(const MaximalChain& chain, const BalancedColoring& f) {
  int h = 0, worst = 0;
  for (int x : chain.order) {
    h += f.at(x);
    worst = std::max(worst, h < 0 ? -h : h);
  }
  return worst;
}

namespace {

void check_brute_caps(const SetSystem& X) {
  if (X.n() > kMaxBruteForceGround)
    throw capacity_error("chain search capped at n <= 20");
  if (X.size() > kMaxBruteForceSets)
    throw capacity_error("chain search capped at |X| <= 2^20");
}

// Cost-only variant of the chain DP; -1 marks unreachable sets.
// Shared by best_chain_for (with parents) and the epsilon counter.
struct ChainDp {
  std::vector<Mask> by_layer_sets;       // sets sorted by popcount then value
  std::vector<std::size_t> layer_begin;  // index into by_layer_sets per size

  explicit ChainDp(const SetSystem& X) {
    by_layer_sets = X.sets();
    std::sort(by_layer_sets.begin(), by_layer_sets.end(), [](Mask a, Mask b) {
      int pa = popcount(a), pb = popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    layer_begin.assign(static_cast<std::size_t>(X.n()) + 2, by_layer_sets.size());
    for (std::size_t i = by_layer_sets.size(); i-- > 0;)
      layer_begin[popcount(by_layer_sets[i])] = i;
    for (std::size_t s = layer_begin.size() - 1; s-- > 0;)
      layer_begin[s] = std::min(layer_begin[s], layer_begin[s + 1]);
  }
};

}  // namespace

std::optional<std::pair<MaximalChain, int>> best_chain_for(const SetSystem& X,
                                                           const BalancedColoring& f) {
  check_brute_caps(X);
  if (f.n() != X.n()) throw dimension_error("coloring size differs from ground set");
  const Mask full = full_mask(X.n());
  if (!X.contains(0) || !X.contains(full)) return std::nullopt;

  ChainDp dp(X);
  std::unordered_map<Mask, int> cost;
  std::unordered_map<Mask, int> parent_elem;
  cost.reserve(X.size());
  cost[0] = 0;
  for (int size = 1; size <= X.n(); ++size) {
    for (std::size_t i = dp.layer_begin[size]; i < dp.layer_begin[size + 1]; ++i) {
      Mask s = dp.by_layer_sets[i];
      int here = std::abs(f.imbalance(s));
      int best = -1, best_elem = -1;
      for (Mask rest = s; rest != 0; rest &= rest - 1) {
        int x = __builtin_ctz(rest);
        auto it = cost.find(s ^ (Mask{1} << x));
        if (it == cost.end()) continue;
        int cand = std::max(it->second, here);
        if (best == -1 || cand < best || (cand == best && x < best_elem)) {
          best = cand;
          best_elem = x;
        }
      }
      if (best != -1) {
        cost[s] = best;
        parent_elem[s] = best_elem;
      }
    }
  }
  auto it = cost.find(full);
  if (it == cost.end()) return std::nullopt;

  MaximalChain chain;
  chain.order.resize(X.n());
  Mask cur = full;
  for (int level = X.n(); level > 0; --level) {
    int x = parent_elem.at(cur);
    chain.order[level - 1] = x;
    cur ^= Mask{1} << x;
  }
  return std::make_pair(std::move(chain), it->second);
}

namespace {

// Does X admit a chain with every level imbalance <= k under f?
bool admits_chain_within(const SetSystem& X, const ChainDp& dp,
                         const BalancedColoring& f, int k) {
  const Mask full = full_mask(X.n());
  if (!X.contains(0) || !X.contains(full)) return false;
  std::unordered_set<Mask> ok;
  ok.reserve(X.size());
  ok.insert(0);
  for (int size = 1; size <= X.n(); ++size) {
    for (std::size_t i = dp.layer_begin[size]; i < dp.layer_begin[size + 1]; ++i) {
      Mask s = dp.by_layer_sets[i];
      if (std::abs(f.imbalance(s)) > k) continue;
      for (Mask rest = s; rest != 0; rest &= rest - 1) {
        int x = __builtin_ctz(rest);
        if (ok.count(s ^ (Mask{1} << x)) != 0) {
          ok.insert(s);
          break;
        }
      }
    }
  }
  return ok.count(full) != 0;
}

bool has_maximal_chain(const SetSystem& X, const ChainDp& dp) {
  const Mask full = full_mask(X.n());
  if (!X.contains(0) || !X.contains(full)) return false;
  std::unordered_set<Mask> reach;
  reach.insert(0);
  for (int size = 1; size <= X.n(); ++size) {
    for (std::size_t i = dp.layer_begin[size]; i < dp.layer_begin[size + 1]; ++i) {
      Mask s = dp.by_layer_sets[i];
      for (Mask rest = s; rest != 0; rest &= rest - 1) {
        int x = __builtin_ctz(rest);
        if (reach.count(s ^ (Mask{1} << x)) != 0) {
          reach.insert(s);
          break;
        }
      }
    }
  }
  return reach.count(full) != 0;
}

}  // namespace

int chain_balance(const SetSystem& X) {
  check_brute_caps(X);
  GroundSize g(X.n());
  ChainDp dp(X);
  if (!has_maximal_chain(X, dp))
    throw infeasible_error("set system admits no maximal chain");
  BalancedColoringRange range(g);
  int worst = 0;
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    BalancedColoring f = range.at(i);
    // Smallest k admitting a chain for this f; linear scan is fine since
    // worst only ratchets upward and k <= n/2.
    int k = worst;
    while (!admits_chain_within(X, dp, f, k)) ++k;
    worst = k;
  }
  return worst;
}

Fraction average_case_epsilon(const SetSystem& X, int k) {
  check_brute_caps(X);
  if (k < 0) throw domain_error("imbalance budget must be >= 0");
  GroundSize g(X.n());
  ChainDp dp(X);
  BalancedColoringRange range(g);
  long long hits = 0;
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    if (admits_chain_within(X, dp, range.at(i), k)) ++hits;
  }
  return Fraction{hits, static_cast<long long>(range.count())};
}

}  // namespace chainbal

// test_core.cpp -- colorings, set systems, chains, and the epsilon oracle.
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "chainbal/core.hpp"
#include "chainbal/errors.hpp"
#include "chainbal/rng.hpp"

using namespace chainbal;

namespace {

SetSystem power_set(int n) {
  std::vector<Mask> sets(std::size_t{1} << n);
  for (std::size_t i = 0; i < sets.size(); ++i) sets[i] = static_cast<Mask>(i);
  return SetSystem(n, std::move(sets));
}

SetSystem identity_prefixes(int n) {
  std::vector<Mask> sets;
  for (int k = 0; k <= n; ++k) sets.push_back(full_mask(k));
  return SetSystem(n, std::move(sets));
}

BalancedColoring coloring(std::initializer_list<int> vals) {
  std::vector<signed char> v;
  for (int x : vals) v.push_back(static_cast<signed char>(x));
  return BalancedColoring(std::move(v));
}

}  // namespace

TEST_CASE("mask helpers") {
  CHECK(full_mask(4) == 0xFu);
  CHECK(full_mask(32) == 0xFFFFFFFFu);
  CHECK(popcount(0b1011u) == 3);
}

TEST_CASE("balanced coloring validation") {
  CHECK_NOTHROW(coloring({1, -1}));
  CHECK_THROWS_AS(coloring({1, -1, 1}), domain_error);       // odd length
  CHECK_THROWS_AS(coloring({1, 1}), domain_error);           // nonzero sum
  CHECK_THROWS_AS(coloring({2, -2}), domain_error);          // bad labels
  BalancedColoring f = coloring({1, -1, 1, -1});
  CHECK(f.imbalance(0b0011u) == 0);
  CHECK(f.imbalance(0b0101u) == 2);
  CHECK(imbalance(f, 0b1111u) == 0);
}

TEST_CASE("binomial values and overflow") {
  CHECK(binomial(8, 4) == 70);
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(12, 6) == 924);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(64, 32) == 1832624140942590534ull);
  CHECK_THROWS_AS(binomial(70, 35), capacity_error);
}

TEST_CASE("balanced coloring range enumerates all sign patterns once") {
  BalancedColoringRange range{GroundSize{8}};
  REQUIRE(range.count() == 70);
  std::set<std::vector<signed char>> seen;
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    BalancedColoring f = range.at(i);
    int sum = 0;
    for (int e = 0; e < 8; ++e) sum += f.at(e);
    CHECK(sum == 0);
    seen.insert(f.values());
  }
  CHECK(seen.size() == 70);
}

TEST_CASE("random balanced coloring is balanced and seed-stable") {
  Rng a(31337), b(31337);
  BalancedColoring f = random_balanced_coloring(GroundSize{64}, a);
  BalancedColoring g = random_balanced_coloring(GroundSize{64}, b);
  CHECK(f.values() == g.values());
  int sum = 0;
  for (int e = 0; e < 64; ++e) sum += f.at(e);
  CHECK(sum == 0);
}

TEST_CASE("set system sorts, dedups, validates") {
  SetSystem X(3, {0b101u, 0b001u, 0b101u, 0u});
  CHECK(X.size() == 3);
  CHECK(std::is_sorted(X.sets().begin(), X.sets().end()));
  CHECK(X.contains(0b101u));
  CHECK_FALSE(X.contains(0b010u));
  CHECK_THROWS_AS(SetSystem(2, std::vector<Mask>{0b100u}), dimension_error);
  CHECK_THROWS_AS(SetSystem(0, std::vector<Mask>{}), domain_error);
  CHECK_THROWS_AS(SetSystem(33, std::vector<Mask>{}), domain_error);
}

TEST_CASE("chain cost tracks the worst prefix") {
  MaximalChain chain{{0, 1, 2, 3}};
  CHECK(chain.set_at(0) == 0u);
  CHECK(chain.set_at(2) == 0b0011u);
  CHECK(chain_cost(chain, coloring({1, -1, 1, -1})) == 1);
  CHECK(chain_cost(chain, coloring({1, 1, -1, -1})) == 2);
}

TEST_CASE("best chain on the power set balances every coloring at 1") {
  SetSystem X = power_set(4);
  BalancedColoringRange range{GroundSize{4}};
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    auto best = best_chain_for(X, range.at(i));
    REQUIRE(best.has_value());
    CHECK(best->second <= 1);
    CHECK(chain_cost(best->first, range.at(i)) == best->second);
  }
  CHECK(chain_balance(X) == 1);
}

TEST_CASE("identity prefixes have balance 2 and epsilon 4/6 at level 1") {
  SetSystem X = identity_prefixes(4);
  CHECK(chain_balance(X) == 2);
  Fraction eps1 = average_case_epsilon(X, 1);
  CHECK(eps1.num == 4);
  CHECK(eps1.den == 6);
  Fraction eps0 = average_case_epsilon(X, 0);
  CHECK(eps0.num == 0);
  Fraction eps2 = average_case_epsilon(X, 2);
  CHECK(eps2.num == 6);
}

TEST_CASE("identity prefixes over [8] give the 16/70 epsilon") {
  SetSystem X = identity_prefixes(8);
  Fraction eps = average_case_epsilon(X, 1);
  CHECK(eps.num == 16);
  CHECK(eps.den == 70);
  // Independent count: the chain works iff every even prefix sums to zero,
  // i.e. the labels pair up as (+-) or (-+) in positions (1,2)(3,4)(5,6)(7,8).
  BalancedColoringRange range{GroundSize{8}};
  int witnesses = 0;
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    BalancedColoring f = range.at(i);
    bool ok = true;
    for (int p = 0; p < 8; p += 2) ok = ok && f.at(p) + f.at(p + 1) == 0;
    witnesses += ok ? 1 : 0;
  }
  CHECK(witnesses == 16);
}

TEST_CASE("chain balance rejects systems without maximal chains") {
  SetSystem X(4, {0u, 0b1111u});  // no singleton rungs
  CHECK_THROWS_AS(chain_balance(X), infeasible_error);
}

TEST_CASE("brute-force caps are enforced") {
  CHECK_THROWS_AS(BalancedColoringRange{GroundSize{22}}, capacity_error);
  SetSystem wide(22, {0u, full_mask(22)});
  CHECK_THROWS_AS(chain_balance(wide), capacity_error);
}

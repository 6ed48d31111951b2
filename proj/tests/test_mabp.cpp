// test_mabp.cpp -- prime-field helpers, branching programs over chain
// systems, and the full-rank certificates.
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "chainbal/core.hpp"
#include "chainbal/errors.hpp"
#include "chainbal/fp.hpp"
#include "chainbal/mabp.hpp"
#include "chainbal/rng.hpp"

using namespace chainbal;

namespace {

const PrimeFieldConfig kField{};  // 2^61 - 1

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

std::uint64_t direct_eval(const std::unordered_map<Mask, std::uint64_t>& coeffs,
                          std::span<const std::uint64_t> point, std::uint64_t p) {
  std::uint64_t total = 0;
  for (const auto& [mask, c] : coeffs) {
    std::uint64_t term = c;
    for (Mask m = mask; m != 0; m &= m - 1)
      term = mulmod(term, point[static_cast<std::size_t>(__builtin_ctz(m))] % p, p);
    total = addmod(total, term, p);
  }
  return total;
}

}  // namespace

TEST_CASE("primality, modular arithmetic, and inverses") {
  CHECK(is_probable_prime(2));
  CHECK(is_probable_prime(3));
  CHECK(is_probable_prime((std::uint64_t{1} << 61) - 1));
  CHECK(!is_probable_prime(0));
  CHECK(!is_probable_prime(1));
  CHECK(!is_probable_prime(4));
  CHECK(!is_probable_prime(561));      // Carmichael
  CHECK(!is_probable_prime(1ull << 61));

  const std::uint64_t p = kDefaultModulus;
  CHECK(addmod(p - 1, 1, p) == 0);
  CHECK(submod(0, 1, p) == p - 1);
  CHECK(mulmod(p - 1, p - 1, p) == 1);  // (-1)^2
  CHECK(powmod(3, p - 1, p) == 1);      // Fermat
  for (std::uint64_t a : {std::uint64_t{2}, std::uint64_t{12345}, p - 7}) {
    CHECK(mulmod(a, invmod(a, p), p) == 1);
  }
  CHECK_THROWS_AS(invmod(0, p), domain_error);
}

TEST_CASE("field configuration bounds") {
  CHECK_NOTHROW(kField.validate(12));
  CHECK_THROWS_AS(PrimeFieldConfig{97}.validate(8), domain_error);   // too small
  CHECK_THROWS_AS(PrimeFieldConfig{100}.validate(2), domain_error);  // composite
  CHECK_THROWS_AS(PrimeFieldConfig{(std::uint64_t{1} << 62) + 1}.validate(2),
                  domain_error);
  CHECK_THROWS_AS(kField.validate(1), domain_error);
}

TEST_CASE("rank by row reduction") {
  const std::uint64_t p = 7;
  CHECK(matrix_rank({{1, 2}, {2, 4}}, 2, p) == 1);  // second row is 2x the first
  CHECK(matrix_rank({{0, 1}, {1, 0}}, 2, p) == 2);
  CHECK(matrix_rank({{0, 0}, {0, 0}}, 2, p) == 0);
  CHECK(matrix_rank({{1, 2, 3}, {4, 5, 6}, {5, 0, 2}}, 3, p) == 2);  // row3 = r1+r2
  CHECK(matrix_rank({}, 4, p) == 0);
}

TEST_CASE("weight assignments index position by element") {
  WeightAssignment w = WeightAssignment::uniform(3, 9);
  CHECK(w.w.size() == 9);
  CHECK(w.at(1, 0) == 9);
  CHECK(w.at(3, 2) == 9);

  MaximalChain chain{{1, 0, 3, 2}};
  WeightAssignment ind = WeightAssignment::chain_indicator(chain, 4);
  CHECK(ind.at(1, 1) == 1);
  CHECK(ind.at(1, 0) == 0);
  CHECK(ind.at(2, 0) == 1);
  CHECK(ind.at(3, 3) == 1);
  CHECK(ind.at(4, 2) == 1);
  MaximalChain stub{{0, 1}};
  CHECK_THROWS_AS(WeightAssignment::chain_indicator(stub, 4), dimension_error);
}

TEST_CASE("two-element program is the textbook polynomial") {
  SetSystem X = power_set(2);
  Rng rng(derive_seed(21, 0, 0));
  WeightAssignment w = WeightAssignment::random(2, kField, rng);
  Abp abp = build_abp(X, w, kField);
  REQUIRE(abp.vertices.size() == 2);  // empty set and ground set
  REQUIRE(abp.edges.size() == 2);     // one per middle singleton

  const std::uint64_t p = kField.modulus;
  // (x0 + x1) * (w_{1,0} w_{2,1} + w_{1,1} w_{2,0})
  const std::uint64_t c = addmod(mulmod(w.at(1, 0), w.at(2, 1), p),
                                 mulmod(w.at(1, 1), w.at(2, 0), p), p);
  auto coeffs = expand_coefficients(abp);
  REQUIRE(coeffs.size() == 2);
  CHECK(coeffs.at(0b01u) == c);
  CHECK(coeffs.at(0b10u) == c);

  std::vector<std::uint64_t> point = {5, 11};
  CHECK(abp_evaluate(abp, point) == mulmod(16 % p, c, p));

  // The canonical partition matrix is [[0, c], [c, 0]] with rank 2.
  CoefficientMatrix m = coefficient_matrix(coeffs, coloring({1, -1}), p);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0][0] == 0);
  CHECK(m.entries[0][1] == c);
  CHECK(m.entries[1][0] == c);
  CHECK(m.entries[1][1] == 0);
  CHECK(field_rank(m) == (c == 0 ? 0 : 2));
}

TEST_CASE("power set of four has the expected layer structure") {
  SetSystem X = power_set(4);
  WeightAssignment w = WeightAssignment::uniform(4, 1);
  Abp abp = build_abp(X, w, kField);
  CHECK(abp.vertices.size() == 8);  // 1 + 6 + 1 even-cardinality sets
  CHECK(abp.edges.size() == 24);    // 12 into the pair layer, 12 out of it
  CHECK(abp.vertices.front() == 0u);
  CHECK(abp.vertices.back() == full_mask(4));
  CHECK(std::is_sorted(abp.vertices.begin(), abp.vertices.end(),
                       [](Mask a, Mask b) {
                         return std::make_pair(popcount(a), a) <
                                std::make_pair(popcount(b), b);
                       }));

  // Cross-check the layered evaluation against the exact expansion.
  auto coeffs = expand_coefficients(abp);
  std::vector<std::uint64_t> ones(4, 1);
  CHECK(abp_evaluate(abp, ones) == direct_eval(coeffs, ones, kField.modulus));
}

TEST_CASE("systems missing the chain endpoints are rejected") {
  std::vector<Mask> no_empty = {0b01u, 0b11u};
  CHECK_THROWS_AS(build_abp(SetSystem(2, std::move(no_empty)),
                            WeightAssignment::uniform(2, 1), kField),
                  structure_error);
  std::vector<Mask> no_full = {0u, 0b01u};
  CHECK_THROWS_AS(build_abp(SetSystem(2, std::move(no_full)),
                            WeightAssignment::uniform(2, 1), kField),
                  structure_error);
  CHECK_THROWS_AS(build_abp(power_set(2), WeightAssignment::uniform(4, 1), kField),
                  dimension_error);
  PrimeFieldConfig bad{100};
  CHECK_THROWS_AS(build_abp(power_set(2), WeightAssignment::uniform(2, 1), bad),
                  domain_error);
}

TEST_CASE("evaluation agrees with expansion on random points") {
  SetSystem X = power_set(6);
  Rng rng(derive_seed(22, 0, 0));
  WeightAssignment w = WeightAssignment::random(6, kField, rng);
  Abp abp = build_abp(X, w, kField);
  auto coeffs = expand_coefficients(abp);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint64_t> point(6);
    for (auto& x : point) x = rng.below(kField.modulus);
    CAPTURE(trial);
    CHECK(abp_evaluate(abp, point) == direct_eval(coeffs, point, kField.modulus));
  }
  std::vector<std::uint64_t> short_point(5, 1);
  CHECK_THROWS_AS(abp_evaluate(abp, short_point), input_error);
}

TEST_CASE("expansion is capped at twelve elements") {
  Abp abp;
  abp.n = 14;
  CHECK_THROWS_AS(expand_coefficients(abp), capacity_error);
}

TEST_CASE("power sets certify full rank") {
  for (int n : {2, 4, 6}) {
    CAPTURE(n);
    SetSystem X = power_set(n);
    Rng rng(derive_seed(23, 0, 0));
    RankReport rep = full_rank_check(X, rng, kField);
    CHECK(rep.pass);
    CHECK(rep.precondition_ok);
    CHECK(rep.chain_balance_value == 1);  // every chain crosses a singleton
    CHECK(rep.expected_rank == (1 << (n / 2)));
    CHECK(rep.partitions.size() == binomial(n, n / 2) / 2);
    for (const PartitionRank& pr : rep.partitions) {
      CHECK(pr.rank == pr.expected);
      CHECK(((pr.positive_side >> 0) & 1u) == 1u);  // element 0 pinned positive
      CHECK(popcount(pr.positive_side) == n / 2);
    }
  }
}

TEST_CASE("prefix chains fail the certificate and its precondition") {
  SetSystem X = identity_prefixes(4);
  Rng rng(derive_seed(24, 0, 0));
  RankReport rep = full_rank_check(X, rng, kField);
  CHECK(!rep.pass);
  CHECK(!rep.precondition_ok);
  CHECK(rep.chain_balance_value == 2);
  REQUIRE(rep.partitions.size() == 3);
  // The split along the chain's own halves sees the single gadget product
  // (x0+x1)(x2+x3): a rank-one outer product.
  bool found = false;
  for (const PartitionRank& pr : rep.partitions) {
    if (pr.positive_side != 0b0011u) continue;
    found = true;
    CHECK(pr.rank == 1);
    CHECK(pr.expected == 4);
  }
  CHECK(found);
}

TEST_CASE("rank reports are identical across job counts and reruns") {
  SetSystem X = power_set(4);
  Rng a(derive_seed(25, 0, 0));
  Rng b(derive_seed(25, 0, 0));
  RankReport serial = full_rank_check(X, a, kField, 1);
  RankReport parallel = full_rank_check(X, b, kField, 4);
  CHECK(serial.pass == parallel.pass);
  REQUIRE(serial.partitions.size() == parallel.partitions.size());
  for (std::size_t i = 0; i < serial.partitions.size(); ++i) {
    CHECK(serial.partitions[i].positive_side == parallel.partitions[i].positive_side);
    CHECK(serial.partitions[i].rank == parallel.partitions[i].rank);
  }
}

TEST_CASE("no maximal chain means an indeterminate precondition") {
  SetSystem X(4, {0u, 0b1111u});
  Rng rng(derive_seed(26, 0, 0));
  RankReport rep = full_rank_check(X, rng, kField);
  CHECK(rep.chain_balance_value == -1);
  CHECK(!rep.precondition_ok);
  CHECK(!rep.pass);  // the empty-to-full edge set computes the zero polynomial
}

TEST_CASE("chain indicator weights project onto the bare gadget product") {
  SetSystem X = power_set(4);
  GadgetReport rep = gadget_projection_check(X, coloring({1, -1, 1, -1}), kField);
  CHECK(rep.chain_found);
  CHECK(rep.projection_matches);
  CHECK(rep.rank == 4);
  CHECK(rep.expected == 4);
  CHECK(rep.pass);

  // The lone prefix chain cannot balance a pair-heavy coloring at level 1.
  SetSystem P = identity_prefixes(4);
  GadgetReport miss = gadget_projection_check(P, coloring({1, 1, -1, -1}), kField);
  CHECK(!miss.chain_found);
  CHECK(!miss.pass);
  CHECK(miss.rank == 0);
}

TEST_CASE("single-variable blocks collapse to the halved evaluation") {
  SetSystem X = power_set(4);
  Rng rng(derive_seed(27, 0, 0));
  WeightAssignment w = WeightAssignment::random(4, kField, rng);
  const std::uint64_t p = kField.modulus;

  Abp abp = build_abp(X, w, kField);
  SmAbp sm = sm_build_abp(X, 1, w, kField);
  auto coeffs = sm_expand_coefficients(sm);

  // Base 2 keys: the all-blocks-present monomial is 0b1111.
  std::uint64_t full_key = 0;
  for (int u = 0; u < 4; ++u) full_key += std::uint64_t{1} << u;
  REQUIRE(coeffs.count(full_key) == 1);

  std::vector<std::uint64_t> ones(4, 1);
  const std::uint64_t halves = invmod(powmod(2, 2, p), p);  // 2 gadgets of (1+1)
  CHECK(coeffs.at(full_key) == mulmod(abp_evaluate(abp, ones), halves, p));

  // Block size 1 admits exactly one per-block choice: expected rank 1.
  Rng rng2(derive_seed(28, 0, 0));
  RankReport rep = sm_full_rank_check(X, 1, rng2, kField);
  CHECK(rep.pass);
  CHECK(rep.expected_rank == 1);
}

TEST_CASE("wider blocks certify block-power ranks") {
  SetSystem X = power_set(4);
  for (int block : {2, 3}) {
    CAPTURE(block);
    Rng rng(derive_seed(29, 0, 0));
    RankReport rep = sm_full_rank_check(X, block, rng, kField);
    CHECK(rep.pass);
    CHECK(rep.precondition_ok);
    CHECK(rep.expected_rank == block * block);
    CHECK(rep.partitions.size() == 3);
    for (const PartitionRank& pr : rep.partitions) CHECK(pr.rank == pr.expected);
  }

  Rng rng(derive_seed(30, 0, 0));
  PrimeFieldConfig small{241};
  CHECK_THROWS_AS(sm_full_rank_check(X, 3, rng, small), domain_error);
  CHECK_THROWS_AS(sm_build_abp(X, 0, WeightAssignment::uniform(4, 1), kField),
                  domain_error);
}

TEST_CASE("set-multilinear programs are deterministic across jobs") {
  SetSystem X = power_set(4);
  Rng a(derive_seed(31, 0, 0));
  Rng b(derive_seed(31, 0, 0));
  RankReport serial = sm_full_rank_check(X, 2, a, kField, 1);
  RankReport parallel = sm_full_rank_check(X, 2, b, kField, 3);
  REQUIRE(serial.partitions.size() == parallel.partitions.size());
  for (std::size_t i = 0; i < serial.partitions.size(); ++i) {
    CHECK(serial.partitions[i].positive_side == parallel.partitions[i].positive_side);
    CHECK(serial.partitions[i].rank == parallel.partitions[i].rank);
  }
}

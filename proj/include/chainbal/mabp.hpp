// mabp.hpp -- layered branching programs over a chain system, and the rank
// checks that certify full-rankness of the computed polynomial.
//
// Vertices are the even-cardinality sets of the system; an edge joins R to T
// through each middle set S and carries w_{|S|,u} * (x_u + x_v) * w_{|T|,v}
// where u = S \ R, v = T \ S. Summing over source-sink paths yields one
// gadget product per maximal chain, weighted by the chain's position
// weights. Expansion is exact and sparse; ground size is capped.
#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "chainbal/core.hpp"
#include "chainbal/fp.hpp"
#include "chainbal/rng.hpp"

namespace chainbal {

constexpr int kMaxExpansionGround = 12;

// w[(t-1)*n + u] is the weight of placing element u at position t (1-based).
struct WeightAssignment {
  int n = 0;
  std::vector<std::uint64_t> w;

  std::uint64_t at(int t, int u) const {
    return w[(static_cast<std::size_t>(t) - 1) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(u)];
  }
  static WeightAssignment uniform(int n, std::uint64_t value);
  static WeightAssignment random(int n, const PrimeFieldConfig& field, Rng& rng);
  // 0/1 weights that keep exactly one chain's placements alive.
  static WeightAssignment chain_indicator(const MaximalChain& chain, int n);
};

struct AbpEdge {
  Mask from = 0, to = 0;
  int mid = 0, tail = 0;  // u = S \ R placed first, v = T \ S second
  std::uint64_t w1 = 1, w2 = 1;
};

struct Abp {
  int n = 0;
  std::uint64_t modulus = kDefaultModulus;
  std::vector<Mask> vertices;  // even-cardinality sets, sorted by (size, value)
  std::vector<AbpEdge> edges;  // sorted by (|from|, from, mid, tail)
};

// structure_error when the system lacks the empty set or the ground set.
Abp build_abp(const SetSystem& X, const WeightAssignment& w,
              const PrimeFieldConfig& field);

// Sink value of the layered dynamic program at a full variable assignment.
std::uint64_t abp_evaluate(const Abp& abp, std::span<const std::uint64_t> point);

// Monomial support mask -> coefficient; zero coefficients dropped.
std::unordered_map<Mask, std::uint64_t> expand_coefficients(const Abp& abp);

struct CoefficientMatrix {
  std::vector<int> y, z;  // +1-side and -1-side elements, ascending
  std::uint64_t modulus = kDefaultModulus;
  std::vector<std::vector<std::uint64_t>> entries;  // [subset of y][subset of z]
};

// Entry (A subset of y, B subset of z) = coefficient of the monomial with
// support A u B. Subsets are indexed by bit i <-> i-th listed element.
CoefficientMatrix coefficient_matrix(
    const std::unordered_map<Mask, std::uint64_t>& coeffs,
    const BalancedColoring& partition, std::uint64_t modulus);

int field_rank(const CoefficientMatrix& mat);

struct PartitionRank {
  Mask positive_side = 0;
  int rank = 0;
  int expected = 0;
};

struct RankReport {
  bool pass = false;
  bool precondition_ok = false;  // input system balances every coloring at 1
  int chain_balance_value = -1;  // -1 when the system has no maximal chain
  int expected_rank = 0;
  std::vector<PartitionRank> partitions;
};

// Random weights, exact expansion, and the rank of every unordered
// equipartition (element 0 pinned to the positive side). PASS iff every
// rank reaches 2^(n/2). Partitions are ranked concurrently when jobs > 1;
// the report is identical for any job count.
RankReport full_rank_check(const SetSystem& X, Rng& rng,
                           const PrimeFieldConfig& field, int jobs = 1);

struct GadgetReport {
  bool pass = false;
  bool chain_found = false;        // some chain balances f at level 1
  bool projection_matches = false; // projected coefficients = chain's gadget
  int rank = 0;
  int expected = 0;
};

// 0/1 substitution along the balancing chain of f; the survivor must be the
// bare gadget product with full rank against f.
GadgetReport gadget_projection_check(const SetSystem& X, const BalancedColoring& f,
                                     const PrimeFieldConfig& field);

// Set-multilinear variant: ground element u becomes a block of block_size
// variables x_{u,j}; the edge gadget is the inner product of the two blocks.
struct SmAbp {
  int n = 0;
  int block_size = 1;
  std::uint64_t modulus = kDefaultModulus;
  std::vector<Mask> vertices;
  std::vector<AbpEdge> edges;
};

SmAbp sm_build_abp(const SetSystem& X, int block_size, const WeightAssignment& w,
                   const PrimeFieldConfig& field);

// Monomial key: one digit per block in base (block_size + 1); digit 0 means
// the block is absent, digit 1+j selects variable j.
std::unordered_map<std::uint64_t, std::uint64_t> sm_expand_coefficients(
    const SmAbp& abp);

// Rows range over per-block variable choices on the +1 blocks, columns over
// the -1 blocks; entry = coefficient of the combined choice.
std::vector<std::vector<std::uint64_t>> sm_coefficient_matrix(
    const std::unordered_map<std::uint64_t, std::uint64_t>& coeffs,
    const BalancedColoring& partition, int block_size, std::uint64_t modulus);

RankReport sm_full_rank_check(const SetSystem& X, int block_size, Rng& rng,
                              const PrimeFieldConfig& field, int jobs = 1);

}  // namespace chainbal

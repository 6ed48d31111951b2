#include "chainbal/mabp.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "chainbal/errors.hpp"
#include "chainbal/parallel.hpp"

namespace chainbal {

WeightAssignment WeightAssignment::uniform(int n, std::uint64_t value) {
  WeightAssignment wa;
  wa.n = n;
  wa.w.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), value);
  return wa;
}

WeightAssignment WeightAssignment::random(int n, const PrimeFieldConfig& field,
                                          Rng& rng) {
  WeightAssignment wa = uniform(n, 0);
  for (auto& v : wa.w) v = rng.below(field.modulus);
  return wa;
}

WeightAssignment WeightAssignment::chain_indicator(const MaximalChain& chain,
                                                   int n) {
  if (static_cast<int>(chain.order.size()) != n)
    throw dimension_error("chain does not cover the ground set");
  WeightAssignment wa = uniform(n, 0);
  for (int t = 1; t <= n; ++t)
    wa.w[(static_cast<std::size_t>(t) - 1) * static_cast<std::size_t>(n) +
         static_cast<std::size_t>(chain.order[static_cast<std::size_t>(t - 1)])] = 1;
  return wa;
}

namespace {

void check_field(const PrimeFieldConfig& field) {
  if (field.modulus >= (std::uint64_t{1} << 62) ||
      !is_probable_prime(field.modulus))
    throw domain_error("modulus must be a prime below 2^62");
}

std::vector<std::vector<Mask>> by_cardinality(const SetSystem& X) {
  std::vector<std::vector<Mask>> buckets(static_cast<std::size_t>(X.n()) + 1);
  for (Mask s : X.sets()) buckets[static_cast<std::size_t>(popcount(s))].push_back(s);
  return buckets;
}

template <typename AbpT>
AbpT assemble(const SetSystem& X, const WeightAssignment& w,
              const PrimeFieldConfig& field) {
  check_field(field);
  const int n = X.n();
  if (n % 2 != 0) throw domain_error("ground size must be even");
  if (w.n != n) throw dimension_error("weights sized for a different ground set");
  if (!X.contains(0) || !X.contains(full_mask(n)))
    throw structure_error("system lacks the empty set or the ground set");

  AbpT abp;
  abp.n = n;
  abp.modulus = field.modulus;
  auto buckets = by_cardinality(X);
  for (int size = 0; size <= n; size += 2)
    for (Mask s : buckets[static_cast<std::size_t>(size)])
      abp.vertices.push_back(s);

  for (int size = 1; size < n; size += 2) {
    for (Mask s : buckets[static_cast<std::size_t>(size)]) {
      for (Mask r : buckets[static_cast<std::size_t>(size - 1)]) {
        if ((r & s) != r) continue;
        const int u = __builtin_ctz(s & ~r);
        for (Mask t : buckets[static_cast<std::size_t>(size + 1)]) {
          if ((s & t) != s) continue;
          const int v = __builtin_ctz(t & ~s);
          AbpEdge e;
          e.from = r;
          e.to = t;
          e.mid = u;
          e.tail = v;
          e.w1 = w.at(size, u) % field.modulus;
          e.w2 = w.at(size + 1, v) % field.modulus;
          abp.edges.push_back(e);
        }
      }
    }
  }
  std::sort(abp.edges.begin(), abp.edges.end(),
            [](const AbpEdge& a, const AbpEdge& b) {
              const int pa = popcount(a.from), pb = popcount(b.from);
              return std::tie(pa, a.from, a.mid, a.tail) <
                     std::tie(pb, b.from, b.mid, b.tail);
            });
  return abp;
}

// Index of each vertex for the layered passes.
std::unordered_map<Mask, std::size_t> vertex_index(const std::vector<Mask>& vs) {
  std::unordered_map<Mask, std::size_t> idx;
  idx.reserve(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) idx.emplace(vs[i], i);
  return idx;
}

}  // namespace

Abp build_abp(const SetSystem& X, const WeightAssignment& w,
              const PrimeFieldConfig& field) {
  return assemble<Abp>(X, w, field);
}

std::uint64_t abp_evaluate(const Abp& abp, std::span<const std::uint64_t> point) {
  if (static_cast<int>(point.size()) != abp.n)
    throw input_error("point must assign every variable");
  const std::uint64_t p = abp.modulus;
  auto idx = vertex_index(abp.vertices);
  std::vector<std::uint64_t> val(abp.vertices.size(), 0);
  val[idx.at(0)] = 1;
  for (const AbpEdge& e : abp.edges) {
    const std::uint64_t source = val[idx.at(e.from)];
    if (source == 0) continue;
    const std::uint64_t gadget =
        addmod(point[static_cast<std::size_t>(e.mid)] % p,
               point[static_cast<std::size_t>(e.tail)] % p, p);
    const std::uint64_t label = mulmod(mulmod(e.w1, gadget, p), e.w2, p);
    auto& target = val[idx.at(e.to)];
    target = addmod(target, mulmod(source, label, p), p);
  }
  return val[idx.at(full_mask(abp.n))];
}

std::unordered_map<Mask, std::uint64_t> expand_coefficients(const Abp& abp) {
  if (abp.n > kMaxExpansionGround)
    throw capacity_error("expansion capped at n <= 12");
  const std::uint64_t p = abp.modulus;
  auto idx = vertex_index(abp.vertices);
  std::vector<std::unordered_map<Mask, std::uint64_t>> val(abp.vertices.size());
  val[idx.at(0)][0] = 1;
  for (const AbpEdge& e : abp.edges) {
    const auto& source = val[idx.at(e.from)];
    if (source.empty()) continue;
    const std::uint64_t ww = mulmod(e.w1, e.w2, p);
    if (ww == 0) continue;
    auto& target = val[idx.at(e.to)];
    for (const auto& [mask, c] : source) {
      if (((mask >> e.mid) & 1) || ((mask >> e.tail) & 1))
        throw state_error("variable reused along a path");
      const std::uint64_t cc = mulmod(c, ww, p);
      for (int var : {e.mid, e.tail}) {
        auto& slot = target[mask | (Mask{1} << var)];
        slot = addmod(slot, cc, p);
      }
    }
  }
  auto result = std::move(val[idx.at(full_mask(abp.n))]);
  for (auto it = result.begin(); it != result.end();)
    it = it->second == 0 ? result.erase(it) : std::next(it);
  return result;
}

CoefficientMatrix coefficient_matrix(
    const std::unordered_map<Mask, std::uint64_t>& coeffs,
    const BalancedColoring& partition, std::uint64_t modulus) {
  CoefficientMatrix m;
  m.modulus = modulus;
  for (int i = 0; i < partition.n(); ++i)
    (partition.at(i) > 0 ? m.y : m.z).push_back(i);
  if (m.y.size() != m.z.size())
    throw input_error("partition sides must have equal size");
  const std::size_t side = std::size_t{1} << m.y.size();
  m.entries.assign(side, std::vector<std::uint64_t>(side, 0));
  for (std::size_t row = 0; row < side; ++row) {
    Mask ma = 0;
    for (std::size_t i = 0; i < m.y.size(); ++i)
      if ((row >> i) & 1) ma |= Mask{1} << m.y[i];
    for (std::size_t col = 0; col < side; ++col) {
      Mask mb = ma;
      for (std::size_t i = 0; i < m.z.size(); ++i)
        if ((col >> i) & 1) mb |= Mask{1} << m.z[i];
      auto it = coeffs.find(mb);
      if (it != coeffs.end()) m.entries[row][col] = it->second % modulus;
    }
  }
  return m;
}

int field_rank(const CoefficientMatrix& mat) {
  return matrix_rank(mat.entries, mat.entries.size(), mat.modulus);
}

namespace {

int checked_chain_balance(const SetSystem& X) {
  try {
    return chain_balance(X);
  } catch (const infeasible_error&) {
    return -1;
  }
}

}  // namespace

RankReport full_rank_check(const SetSystem& X, Rng& rng,
                           const PrimeFieldConfig& field, int jobs) {
  const int n = X.n();
  field.validate(n);
  if (n > kMaxExpansionGround) throw capacity_error("expansion capped at n <= 12");

  RankReport report;
  report.chain_balance_value = checked_chain_balance(X);
  report.precondition_ok =
      report.chain_balance_value >= 0 && report.chain_balance_value <= 1;
  report.expected_rank = 1 << (n / 2);

  const WeightAssignment w = WeightAssignment::random(n, field, rng);
  const Abp abp = build_abp(X, w, field);
  const auto coeffs = expand_coefficients(abp);

  BalancedColoringRange range{GroundSize{n}};
  std::vector<std::uint64_t> picked;
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    if (range.at(i).at(0) == 1) picked.push_back(i);  // drop transposed twins
  }
  report.partitions.assign(picked.size(), PartitionRank{});
  parallel_for(picked.size(), jobs, [&](std::size_t idx) {
    const BalancedColoring f = range.at(picked[idx]);
    PartitionRank pr;
    for (int e = 0; e < n; ++e)
      if (f.at(e) > 0) pr.positive_side |= Mask{1} << e;
    pr.expected = report.expected_rank;
    pr.rank = field_rank(coefficient_matrix(coeffs, f, field.modulus));
    report.partitions[idx] = pr;
  });
  report.pass = true;
  for (const PartitionRank& pr : report.partitions)
    if (pr.rank != pr.expected) report.pass = false;
  return report;
}

GadgetReport gadget_projection_check(const SetSystem& X, const BalancedColoring& f,
                                     const PrimeFieldConfig& field) {
  const int n = X.n();
  if (n > kMaxExpansionGround) throw capacity_error("expansion capped at n <= 12");
  GadgetReport report;
  report.expected = 1 << (n / 2);

  auto best = best_chain_for(X, f);
  if (!best || best->second > 1) return report;
  report.chain_found = true;
  const MaximalChain& chain = best->first;

  const WeightAssignment w = WeightAssignment::chain_indicator(chain, n);
  const Abp abp = build_abp(X, w, field);
  auto coeffs = expand_coefficients(abp);

  // The chain's own gadget product: every per-pair choice with coefficient 1.
  std::unordered_map<Mask, std::uint64_t> expected{{Mask{0}, 1}};
  for (int i = 0; i < n / 2; ++i) {
    const int u = chain.order[static_cast<std::size_t>(2 * i)];
    const int v = chain.order[static_cast<std::size_t>(2 * i + 1)];
    std::unordered_map<Mask, std::uint64_t> next;
    next.reserve(expected.size() * 2);
    for (const auto& [mask, c] : expected) {
      next[mask | (Mask{1} << u)] = c;
      next[mask | (Mask{1} << v)] = c;
    }
    expected = std::move(next);
  }
  report.projection_matches = coeffs == expected;
  report.rank = field_rank(coefficient_matrix(coeffs, f, field.modulus));
  report.pass = report.projection_matches && report.rank == report.expected;
  return report;
}

SmAbp sm_build_abp(const SetSystem& X, int block_size, const WeightAssignment& w,
                   const PrimeFieldConfig& field) {
  if (block_size < 1) throw domain_error("blocks need at least one variable");
  SmAbp abp = assemble<SmAbp>(X, w, field);
  abp.block_size = block_size;
  if (static_cast<double>(abp.n) *
          std::log2(static_cast<double>(block_size) + 1.0) >
      62.0)
    throw capacity_error("block monomial keys exceed 64 bits");
  return abp;
}

namespace {

std::uint64_t digit_stride(int block, int base) {
  std::uint64_t s = 1;
  for (int i = 0; i < block; ++i) s *= static_cast<std::uint64_t>(base);
  return s;
}

}  // namespace

std::unordered_map<std::uint64_t, std::uint64_t> sm_expand_coefficients(
    const SmAbp& abp) {
  if (abp.n > kMaxExpansionGround)
    throw capacity_error("expansion capped at n <= 12");
  const std::uint64_t p = abp.modulus;
  const int base = abp.block_size + 1;
  auto idx = vertex_index(abp.vertices);
  std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> val(
      abp.vertices.size());
  val[idx.at(0)][0] = 1;
  for (const AbpEdge& e : abp.edges) {
    const auto& source = val[idx.at(e.from)];
    if (source.empty()) continue;
    const std::uint64_t ww = mulmod(e.w1, e.w2, p);
    if (ww == 0) continue;
    const std::uint64_t su = digit_stride(e.mid, base);
    const std::uint64_t sv = digit_stride(e.tail, base);
    auto& target = val[idx.at(e.to)];
    for (const auto& [key, c] : source) {
      if ((key / su) % static_cast<std::uint64_t>(base) != 0 ||
          (key / sv) % static_cast<std::uint64_t>(base) != 0)
        throw state_error("block reused along a path");
      const std::uint64_t cc = mulmod(c, ww, p);
      // The inner-product gadget ties the same in-block index to both ends.
      for (int j = 0; j < abp.block_size; ++j) {
        const std::uint64_t digit = static_cast<std::uint64_t>(j) + 1;
        auto& slot = target[key + digit * su + digit * sv];
        slot = addmod(slot, cc, p);
      }
    }
  }
  auto result = std::move(val[idx.at(full_mask(abp.n))]);
  for (auto it = result.begin(); it != result.end();)
    it = it->second == 0 ? result.erase(it) : std::next(it);
  return result;
}

std::vector<std::vector<std::uint64_t>> sm_coefficient_matrix(
    const std::unordered_map<std::uint64_t, std::uint64_t>& coeffs,
    const BalancedColoring& partition, int block_size, std::uint64_t modulus) {
  std::vector<int> y, z;
  for (int i = 0; i < partition.n(); ++i)
    (partition.at(i) > 0 ? y : z).push_back(i);
  if (y.size() != z.size()) throw input_error("partition sides must have equal size");
  const int base = block_size + 1;
  std::uint64_t side = 1;
  for (std::size_t i = 0; i < y.size(); ++i) {
    side *= static_cast<std::uint64_t>(block_size);
    if (side > (std::uint64_t{1} << 20))
      throw capacity_error("coefficient matrix side exceeds the cap");
  }
  std::vector<std::vector<std::uint64_t>> m(
      static_cast<std::size_t>(side),
      std::vector<std::uint64_t>(static_cast<std::size_t>(side), 0));
  for (std::uint64_t row = 0; row < side; ++row) {
    std::uint64_t key_y = 0, r = row;
    for (int e : y) {
      key_y += (r % static_cast<std::uint64_t>(block_size) + 1) *
               digit_stride(e, base);
      r /= static_cast<std::uint64_t>(block_size);
    }
    for (std::uint64_t col = 0; col < side; ++col) {
      std::uint64_t key = key_y, c = col;
      for (int e : z) {
        key += (c % static_cast<std::uint64_t>(block_size) + 1) *
               digit_stride(e, base);
        c /= static_cast<std::uint64_t>(block_size);
      }
      auto it = coeffs.find(key);
      if (it != coeffs.end())
        m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
            it->second % modulus;
    }
  }
  return m;
}

RankReport sm_full_rank_check(const SetSystem& X, int block_size, Rng& rng,
                              const PrimeFieldConfig& field, int jobs) {
  const int n = X.n();
  if (n > kMaxExpansionGround) throw capacity_error("expansion capped at n <= 12");
  check_field(field);
  // Random-substitution guarantee: modulus > 2^n * n * block_size^(n/2).
  unsigned __int128 needed = (static_cast<unsigned __int128>(1) << n) *
                             static_cast<unsigned __int128>(n);
  for (int i = 0; i < n / 2; ++i)
    needed *= static_cast<unsigned __int128>(block_size);
  if (static_cast<unsigned __int128>(field.modulus) <= needed)
    throw domain_error("modulus too small for this block structure");

  RankReport report;
  report.chain_balance_value = checked_chain_balance(X);
  report.precondition_ok =
      report.chain_balance_value >= 0 && report.chain_balance_value <= 1;
  std::uint64_t expected = 1;
  for (int i = 0; i < n / 2; ++i) expected *= static_cast<std::uint64_t>(block_size);
  report.expected_rank = static_cast<int>(expected);

  const WeightAssignment w = WeightAssignment::random(n, field, rng);
  const SmAbp abp = sm_build_abp(X, block_size, w, field);
  const auto coeffs = sm_expand_coefficients(abp);

  BalancedColoringRange range{GroundSize{n}};
  std::vector<std::uint64_t> picked;
  for (std::uint64_t i = 0; i < range.count(); ++i) {
    if (range.at(i).at(0) == 1) picked.push_back(i);
  }
  report.partitions.assign(picked.size(), PartitionRank{});
  parallel_for(picked.size(), jobs, [&](std::size_t idx) {
    const BalancedColoring f = range.at(picked[idx]);
    PartitionRank pr;
    for (int e = 0; e < n; ++e)
      if (f.at(e) > 0) pr.positive_side |= Mask{1} << e;
    pr.expected = report.expected_rank;
    auto m = sm_coefficient_matrix(coeffs, f, block_size, field.modulus);
    pr.rank = matrix_rank(std::move(m), static_cast<std::size_t>(expected),
                          field.modulus);
    report.partitions[idx] = pr;
  });
  report.pass = true;
  for (const PartitionRank& pr : report.partitions)
    if (pr.rank != pr.expected) report.pass = false;
  return report;
}

}  // namespace chainbal

#include "chainbal/reduction.hpp"

#include <vector>

#include "chainbal/errors.hpp"

namespace chainbal {

SetSystem apply_permutation(const SetSystem& X, const std::vector<int>& perm) {
  const int n = X.n();
  if (static_cast<int>(perm.size()) != n)
    throw dimension_error("permutation length must match the ground size");
  std::vector<char> seen(perm.size(), 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw input_error("not a permutation of the ground set");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<Mask> mapped;
  mapped.reserve(X.size());
  for (Mask s : X.sets()) {
    Mask img = 0;
    for (int i = 0; i < n; ++i)
      if ((s >> i) & 1) img |= Mask{1} << perm[static_cast<std::size_t>(i)];
    mapped.push_back(img);
  }
  return SetSystem(n, std::move(mapped));
}

std::uint64_t reduction_copies(int n, const Fraction& epsilon, int c) {
  if (epsilon.num <= 0 || epsilon.den <= 0)
    throw domain_error("average-case probability must be positive");
  if (c < 0) throw domain_error("copy multiplier must be nonnegative");
  // ceil(c * n / epsilon) = ceil(c * n * den / num), at least one copy.
  const auto scaled = static_cast<unsigned __int128>(c) *
                      static_cast<unsigned __int128>(n) *
                      static_cast<unsigned __int128>(epsilon.den);
  const auto num = static_cast<unsigned __int128>(epsilon.num);
  const auto copies = (scaled + num - 1) / num;
  if (copies > ~std::uint64_t{0})
    throw capacity_error("permutation count does not fit in 64 bits");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(copies));
}

SetSystem reduce_to_worst_case(const SetSystem& X, int k, const Fraction& epsilon,
                               int c, Rng& rng) {
  if (k < 0) throw domain_error("balance level must be nonnegative");
  const std::uint64_t copies = reduction_copies(X.n(), epsilon, c);
  const auto total = static_cast<unsigned __int128>(copies) *
                     static_cast<unsigned __int128>(X.size());
  if (total > kMaxBruteForceSets)
    throw capacity_error("reduced system would exceed the set cap");
  std::vector<Mask> all;
  all.reserve(static_cast<std::size_t>(total));
  for (std::uint64_t i = 0; i < copies; ++i) {
    const std::vector<int> perm = rng.permutation(X.n());
    for (Mask s : X.sets()) {
      Mask img = 0;
      for (int e = 0; e < X.n(); ++e)
        if ((s >> e) & 1) img |= Mask{1} << perm[static_cast<std::size_t>(e)];
      all.push_back(img);
    }
  }
  return SetSystem(X.n(), std::move(all));
}

}  // namespace chainbal

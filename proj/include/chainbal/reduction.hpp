// reduction.hpp -- from average-case balance to worst-case balance.
//
// If some chain of X handles a random balanced coloring with probability
// epsilon, then the union of X under ceil(c * n / epsilon) independent
// random permutations handles every balanced coloring with positive
// probability. The output's worst-case balance is verified separately.
#pragma once

#include <cstdint>
#include <vector>

#include "chainbal/core.hpp"
#include "chainbal/rational.hpp"
#include "chainbal/rng.hpp"

namespace chainbal {

// perm[i] is the image of element i; must be a permutation of [0, n).
SetSystem apply_permutation(const SetSystem& X, const std::vector<int>& perm);

std::uint64_t reduction_copies(int n, const Fraction& epsilon, int c);

// Union of X under reduction_copies(n, epsilon, c) random permutations
// (never fewer than one). k is the balance level the caller asserts X
// achieves on average; it is validated but does not affect the output.
SetSystem reduce_to_worst_case(const SetSystem& X, int k, const Fraction& epsilon,
                               int c, Rng& rng);

}  // namespace chainbal

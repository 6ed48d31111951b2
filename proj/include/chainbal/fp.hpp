// fp.hpp -- arithmetic and Gaussian elimination over a prime field.
#pragma once

#include <cstdint>
#include <vector>

namespace chainbal {

inline constexpr std::uint64_t kDefaultModulus = (std::uint64_t{1} << 61) - 1;

// Deterministic Miller-Rabin over the full 64-bit range.
bool is_probable_prime(std::uint64_t x);

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;  // p < 2^63, no overflow
  return s >= p ? s - p : s;
}
inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % p);
}
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);  // p prime, a != 0

struct PrimeFieldConfig {
  std::uint64_t modulus = kDefaultModulus;

  // Prime, below 2^62 (so addmod stays overflow-free), and large enough for
  // the random-substitution guarantee at ground size n: modulus > 2^n * n *
  // 2^(n/2).
  void validate(int n) const;
};

// Rank by row reduction; consumes the matrix. Rows may have ragged logical
// width `cols`; entries must already be reduced mod p.
int matrix_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols,
                std::uint64_t p);

}  // namespace chainbal

#include "chainbal/fp.hpp"

#include "chainbal/errors.hpp"

namespace chainbal {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw domain_error("zero has no inverse");
  return powmod(a, p - 2, p);
}

bool is_probable_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (x == q) return true;
    if (x % q == 0) return false;
  }
  std::uint64_t d = x - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set decides primality for every 64-bit integer.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t v = powmod(a % x, d, x);
    if (v == 1 || v == x - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      v = mulmod(v, v, x);
      if (v == x - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

void PrimeFieldConfig::validate(int n) const {
  if (n < 2 || n > 32) throw domain_error("ground size out of range");
  if (modulus >= (std::uint64_t{1} << 62))
    throw domain_error("modulus must be below 2^62");
  if (!is_probable_prime(modulus)) throw domain_error("modulus is not prime");
  const auto needed = (static_cast<unsigned __int128>(1) << n) *
                      static_cast<unsigned __int128>(n)
                      << (n / 2);
  if (static_cast<unsigned __int128>(modulus) <= needed)
    throw domain_error("modulus too small for this ground size");
}

int matrix_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t cols,
                std::uint64_t p) {
  int rank = 0;
  for (std::size_t col = 0; col < cols && rank < static_cast<int>(rows.size());
       ++col) {
    std::size_t pivot = rows.size();
    for (std::size_t r = static_cast<std::size_t>(rank); r < rows.size(); ++r)
      if (col < rows[r].size() && rows[r][col] % p != 0) {
        pivot = r;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
    auto& prow = rows[static_cast<std::size_t>(rank)];
    const std::uint64_t inv = invmod(prow[col], p);
    for (std::size_t c = col; c < prow.size(); ++c)
      prow[c] = mulmod(prow[c] % p, inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || col >= rows[r].size()) continue;
      const std::uint64_t factor = rows[r][col] % p;
      if (factor == 0) continue;
      for (std::size_t c = col; c < rows[r].size() && c < prow.size(); ++c)
        rows[r][c] = submod(rows[r][c] % p, mulmod(factor, prow[c], p), p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace chainbal

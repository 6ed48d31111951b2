// bigint.hpp -- arbitrary-precision unsigned integers.
//
// Scope is deliberately narrow: the counting bounds (2^700 * m^63 and
// friends), exact first-passage numerators, and power-of-two denominator
// sums need add/sub/mul, small div, shifts, pow, compare, and decimal
// output. Little-endian 64-bit limbs, no trailing zero limbs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chainbal {

class BigUint {
 public:
  BigUint() = default;
  BigUint(std::uint64_t v);  // NOLINT(google-explicit-constructor)

  static BigUint pow2(std::uint64_t e);
  static BigUint pow(std::uint64_t base, std::uint64_t e);
  BigUint pow_big(std::uint64_t e) const;

  bool is_zero() const { return limbs_.empty(); }
  std::size_t bit_length() const;

  BigUint& operator+=(const BigUint& o);
  BigUint& operator-=(const BigUint& o);  // requires *this >= o
  BigUint operator*(const BigUint& o) const;
  BigUint& mul_small(std::uint64_t f);
  // Exact division only when remainder_out == nullptr is asserted by caller;
  // returns remainder through the pointer otherwise.
  BigUint& div_small(std::uint64_t d, std::uint64_t* remainder_out = nullptr);
  BigUint& operator<<=(std::uint64_t bits);

  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
  friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }

  // -1, 0, +1
  int compare(const BigUint& o) const;
  friend bool operator==(const BigUint& a, const BigUint& b) { return a.compare(b) == 0; }
  friend bool operator<(const BigUint& a, const BigUint& b) { return a.compare(b) < 0; }
  friend bool operator<=(const BigUint& a, const BigUint& b) { return a.compare(b) <= 0; }

  double to_double() const;  // saturates to inf when out of range
  std::string decimal() const;
  std::uint64_t low64() const { return limbs_.empty() ? 0 : limbs_[0]; }
  bool fits_u64() const { return limbs_.size() <= 1; }

 private:
  void trim();
  std::vector<std::uint64_t> limbs_;
};

}  // namespace chainbal

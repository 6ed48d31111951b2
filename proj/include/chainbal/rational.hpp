// rational.hpp -- exact small rationals (64-bit num/den, 128-bit compares).
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "chainbal/errors.hpp"

namespace chainbal {

struct Rat64 {
  long long num = 0;
  long long den = 1;

  Rat64() = default;
  Rat64(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rat64 zero() { return Rat64(); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rat64& a, const Rat64& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rat64& a, const Rat64& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Unreduced count/total fraction; keeps the raw tallies visible.
struct Fraction {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rat64 reduced() const { return Rat64(num, den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

}  // namespace chainbal

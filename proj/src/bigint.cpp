#include "chainbal/bigint.hpp"

#include <algorithm>
#include <cmath>

#include "chainbal/errors.hpp"

namespace chainbal {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

BigUint::BigUint(u64 v) {
  if (v != 0) limbs_.push_back(v);
}

void BigUint::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::pow2(u64 e) {
  BigUint r;
  r.limbs_.assign(e / 64 + 1, 0);
  r.limbs_.back() = u64{1} << (e % 64);
  return r;
}

BigUint BigUint::pow(u64 base, u64 e) {
  return BigUint(base).pow_big(e);
}

BigUint BigUint::pow_big(u64 e) const {
  BigUint acc = 1, sq = *this;
  for (; e != 0; e >>= 1) {
    if (e & 1) acc = acc * sq;
    if (e > 1) sq = sq * sq;
  }
  return acc;
}

std::size_t BigUint::bit_length() const {
  if (limbs_.empty()) return 0;
  u64 top = limbs_.back();
  std::size_t bits = (limbs_.size() - 1) * 64;
  while (top != 0) {
    ++bits;
    top >>= 1;
  }
  return bits;
}

BigUint& BigUint::operator+=(const BigUint& o) {
  if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
  u64 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    u128 s = static_cast<u128>(limbs_[i]) + carry;
    if (i < o.limbs_.size()) s += o.limbs_[i];
    limbs_[i] = static_cast<u64>(s);
    carry = static_cast<u64>(s >> 64);
    if (carry == 0 && i >= o.limbs_.size()) break;
  }
  if (carry != 0) limbs_.push_back(carry);
  return *this;
}

BigUint& BigUint::operator-=(const BigUint& o) {
  if (compare(o) < 0) throw domain_error("BigUint subtraction underflow");
  u64 borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    u128 sub = static_cast<u128>(borrow);
    if (i < o.limbs_.size()) sub += o.limbs_[i];
    if (static_cast<u128>(limbs_[i]) >= sub) {
      limbs_[i] = static_cast<u64>(limbs_[i] - static_cast<u64>(sub));
      borrow = 0;
    } else {
      limbs_[i] = static_cast<u64>((static_cast<u128>(1) << 64) + limbs_[i] - sub);
      borrow = 1;
    }
    if (borrow == 0 && i >= o.limbs_.size()) break;
  }
  trim();
  return *this;
}

BigUint BigUint::operator*(const BigUint& o) const {
  BigUint r;
  if (is_zero() || o.is_zero()) return r;
  r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    u64 carry = 0;
    for (std::size_t j = 0; j < o.limbs_.size(); ++j) {
      u128 cur = static_cast<u128>(limbs_[i]) * o.limbs_[j] + r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<u64>(cur);
      carry = static_cast<u64>(cur >> 64);
    }
    r.limbs_[i + o.limbs_.size()] += carry;
  }
  r.trim();
  return r;
}

BigUint& BigUint::mul_small(u64 f) {
  if (f == 0 || is_zero()) {
    limbs_.clear();
    return *this;
  }
  u64 carry = 0;
  for (auto& limb : limbs_) {
    u128 cur = static_cast<u128>(limb) * f + carry;
    limb = static_cast<u64>(cur);
    carry = static_cast<u64>(cur >> 64);
  }
  if (carry != 0) limbs_.push_back(carry);
  return *this;
}

BigUint& BigUint::div_small(u64 d, u64* remainder_out) {
  if (d == 0) throw domain_error("BigUint division by zero");
  u128 rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    u128 cur = (rem << 64) | limbs_[i];
    limbs_[i] = static_cast<u64>(cur / d);
    rem = cur % d;
  }
  trim();
  if (remainder_out != nullptr) *remainder_out = static_cast<u64>(rem);
  return *this;
}

BigUint& BigUint::operator<<=(u64 bits) {
  if (is_zero() || bits == 0) return *this;
  const std::size_t limb_shift = bits / 64;
  const unsigned bit_shift = static_cast<unsigned>(bits % 64);
  limbs_.insert(limbs_.begin(), limb_shift, 0);
  if (bit_shift != 0) {
    u64 carry = 0;
    for (std::size_t i = limb_shift; i < limbs_.size(); ++i) {
      u64 next_carry = limbs_[i] >> (64 - bit_shift);
      limbs_[i] = (limbs_[i] << bit_shift) | carry;
      carry = next_carry;
    }
    if (carry != 0) limbs_.push_back(carry);
  }
  return *this;
}

int BigUint::compare(const BigUint& o) const {
  if (limbs_.size() != o.limbs_.size())
    return limbs_.size() < o.limbs_.size() ? -1 : 1;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
  }
  return 0;
}

double BigUint::to_double() const {
  double r = 0.0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    r = r * 0x1.0p64 + static_cast<double>(limbs_[i]);
    if (std::isinf(r)) return r;
  }
  return r;
}

std::string BigUint::decimal() const {
  if (is_zero()) return "0";
  BigUint tmp = *this;
  std::string out;
  constexpr u64 chunk = 10'000'000'000'000'000'000ull;  // 10^19
  while (!tmp.is_zero()) {
    u64 rem = 0;
    tmp.div_small(chunk, &rem);
    std::string part = std::to_string(rem);
    if (!tmp.is_zero()) part.insert(0, 19 - part.size(), '0');
    out.insert(0, part);
  }
  return out;
}

}  // namespace chainbal

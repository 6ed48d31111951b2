#include "chainbal/constants.hpp"

#include <algorithm>
#include <cmath>

#include "chainbal/errors.hpp"

namespace chainbal {

void ConstantsProfile::validate() const {
  if (height_coeff < 1 || gap_coeff < 1 || descent_coeff < 1 || base_threshold < 2)
    throw domain_error("profile constants must be positive (threshold >= 2)");
}

double pattern_budget(const ConstantsProfile& p, std::int64_t m) {
  if (m < 1) throw domain_error("segment size must be >= 1");
  return static_cast<double>(p.transition_coeff()) * std::log(static_cast<double>(m)) +
         static_cast<double>(p.base_threshold);
}

std::int64_t pattern_budget_floor(const ConstantsProfile& p, std::int64_t m) {
  // 1e-9 guards the only exactly-integer case (m = 1, where ln m = 0).
  return static_cast<std::int64_t>(std::floor(pattern_budget(p, m) + 1e-9));
}

bool shrinkage_ok(std::int64_t m_next, std::int64_t m_prev) {
  if (m_next < 0 || m_prev < 0) throw domain_error("segment sizes must be >= 0");
  const unsigned __int128 lhs = static_cast<unsigned __int128>(m_next) * m_next * m_next;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(m_prev) * m_prev;
  return lhs <= rhs;
}

int depth_limit(std::int64_t n, const ConstantsProfile& p) {
  if (n < 1) throw domain_error("ground size must be >= 1");
  const BigUint base_n(static_cast<std::uint64_t>(n));
  const BigUint base_m0(static_cast<std::uint64_t>(p.base_threshold));
  std::uint64_t e2 = 1, e3 = 1;
  for (int j = 0; j <= 64; ++j) {
    if (base_n.pow_big(e2) <= base_m0.pow_big(e3)) return j;
    e2 *= 2;
    e3 *= 3;
  }
  throw state_error("depth limit exceeded 64 scales");
}

double h1_value(const ConstantsProfile& p, std::int64_t m) {
  const double dm = static_cast<double>(m);
  return dm - p.descent_coeff -
         1.5 * p.height_coeff * p.descent_coeff * std::log(dm) -
         static_cast<double>(p.base_threshold) / 2.0;
}

double h2_value(const ConstantsProfile& p, std::int64_t m) {
  const double dm = static_cast<double>(m);
  return dm - std::pow(dm, 2.0 / 3.0) - p.gap_coeff * std::log(dm);
}

HypothesisReport check_hypotheses(const ConstantsProfile& p, std::int64_t m_max) {
  p.validate();
  HypothesisReport rep;
  auto scan = [&](std::int64_t lo, auto value, double& worst, std::int64_t& worst_at) {
    bool first = true;
    auto visit = [&](std::int64_t m) {
      const double v = value(m);
      if (first || v < worst) {
        worst = v;
        worst_at = m;
        first = false;
      }
    };
    if (lo > m_max) {
      visit(lo);
      return;
    }
    if (m_max - lo <= (1 << 20)) {
      for (std::int64_t m = lo; m <= m_max; ++m) visit(m);
    } else {
      for (std::int64_t m = lo; m <= m_max; m += std::max<std::int64_t>(1, m / 4096))
        visit(m);
      visit(m_max);
    }
  };
  scan(p.base_threshold, [&](std::int64_t m) { return h1_value(p, m); }, rep.h1_worst,
       rep.h1_worst_at);
  scan(std::max<std::int64_t>(2, p.base_threshold / 2),
       [&](std::int64_t m) { return h2_value(p, m); }, rep.h2_worst, rep.h2_worst_at);
  rep.ok = rep.h1_worst >= 0.0 && rep.h2_worst >= 0.0;
  return rep;
}

}  // namespace chainbal

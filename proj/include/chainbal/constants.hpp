// constants.hpp -- tuning profile for the multiscale builder and the
// arithmetic facts the audits hang off.
#pragma once

#include <cstdint>
#include <string>

#include "chainbal/bigint.hpp"

namespace chainbal {

struct ConstantsProfile {
  // Height bound: reflected imbalance must stay <= 1 + height_coeff * ln m'.
  int height_coeff = 4;
  // Gap bound: steps between balanced visits must stay <= gap_coeff * ln m'.
  int gap_coeff = 28;
  // Descent budget: descent_coeff * h0 steps to return from height h0.
  int descent_coeff = 8;
  // Residuals below this are ordered directly instead of recursing.
  int base_threshold = 700;

  // Prefix-pair travel allowance inside one scale's pattern family.
  int transition_coeff() const { return gap_coeff + height_coeff * descent_coeff; }
  // Exponent in the pattern-count bound m^(transition_coeff + 4).
  int pattern_exponent() const { return transition_coeff() + 4; }

  void validate() const;
};

// transition_coeff * ln m + base_threshold: the grid-travel budget of the
// local pattern family on a size-m segment. All budget comparisons in the
// codebase go through these two helpers so they cannot disagree.
double pattern_budget(const ConstantsProfile& p, std::int64_t m);
std::int64_t pattern_budget_floor(const ConstantsProfile& p, std::int64_t m);

// Exact integer form of m_next <= m_prev^(2/3).
bool shrinkage_ok(std::int64_t m_next, std::int64_t m_prev);

// Smallest J with n^((2/3)^J) <= base_threshold, decided exactly through
// n^(2^J) <= base_threshold^(3^J).
int depth_limit(std::int64_t n, const ConstantsProfile& p);

// H1(m) = m - descent_coeff - 1.5 * height_coeff * descent_coeff * ln m
//         - base_threshold / 2            (needed for m >= base_threshold)
// H2(m) = m - m^(2/3) - gap_coeff * ln m  (needed for m >= base_threshold/2)
double h1_value(const ConstantsProfile& p, std::int64_t m);
double h2_value(const ConstantsProfile& p, std::int64_t m);

struct HypothesisReport {
  bool ok = true;
  double h1_worst = 0.0;  // min margin over the scanned range
  std::int64_t h1_worst_at = 0;
  double h2_worst = 0.0;
  std::int64_t h2_worst_at = 0;
};

// Scans H1 over [base_threshold, m_max] and H2 over [base_threshold/2, m_max]
// (all integers up to 2^20 points, geometric subsampling beyond).
HypothesisReport check_hypotheses(const ConstantsProfile& p, std::int64_t m_max);

}  // namespace chainbal

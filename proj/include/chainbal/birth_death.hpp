// birth_death.hpp -- first-passage laboratory for the dominating walk.
//
// The reflected imbalance is dominated by a birth-death chain that steps up
// with probability p < 1/2 and down otherwise (absorbing sign flips into
// the reflection). Everything here is about the first-passage time tau
// from height 1 to 0: exact pmf, sampling, generating function, the
// exponential-moment partial sums, and the audits built on them.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chainbal/bigint.hpp"
#include "chainbal/rational.hpp"
#include "chainbal/rng.hpp"
#include "chainbal/steered_path.hpp"

namespace chainbal {

struct BirthDeathParams {
  Rat64 up = Rat64(1, 4);  // probability of stepping away from zero
  BirthDeathParams() = default;
  explicit BirthDeathParams(Rat64 p);
};

constexpr std::int64_t kFirstPassageStepCap = 1'000'000;

// One simulated tau; nullopt when the step cap was hit (caller counts aborts).
std::optional<std::int64_t> bd_sample_first_passage(const BirthDeathParams& params,
                                                    Rng& rng);

struct PmfEntry {
  std::int64_t t;  // odd
  BigUint num;
  BigUint den;  // p.den^t
  double value() const;
};

// Exact Pr[tau = t] for odd t <= t_max via the branching convolution
//   A_t = p.num * sum_{u+v=t-1} A_u A_v  over denominator p.den^t.
std::vector<PmfEntry> bd_first_passage_pmf(const BirthDeathParams& params,
                                           std::int64_t t_max);

// Independent route: walk every +-1 path of length t and keep those hitting
// 0 for the first time at t. Capped at t_max <= 23.
std::vector<PmfEntry> bd_first_passage_pmf_by_enumeration(const BirthDeathParams& params,
                                                          std::int64_t t_max);

// (1 - sqrt(1 - 4pq s^2)) / (2ps); minus branch so that G(1) = 1.
double pgf_closed_form(double s, const BirthDeathParams& params);

// Truncated series sum_{odd t <= t_max} s^t Pr[tau = t], terms by the
// Catalan-step recurrence (independent of the closed form).
double pgf_series(double s, const BirthDeathParams& params, std::int64_t t_max);

struct TailRates {
  double decay_rate;    // ln(2/sqrt(3)): exponential rate of the tau tail
  double tail_base;     // exp(-decay_rate) = sqrt(3)/2
  double mgf_limit;     // E[e^{decay_rate * tau}] = sqrt(3) at p = 1/4
  double descent_base;  // mgf_limit * exp(-decay_rate * 8) = 81*sqrt(3)/256
};
TailRates tail_rates();

// Partial sum of E[e^{gamma*tau}] over the first k_max odd times.
// Monotone in k_max; bounded by mgf_limit at p = 1/4.
double mgf_at_gamma(const BirthDeathParams& params, std::int64_t k_max);

// Exact variant for p = 1/4: the partial sum equals sqrt(3) * num / 2^log2_den.
struct MgfPartialExact {
  BigUint num;
  std::int64_t log2_den;
  double value() const;
};
MgfPartialExact mgf_at_gamma_exact(const BirthDeathParams& params, std::int64_t k_max);

struct AuditReport {
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;  // max observed excess over the audited bound
  double fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(samples);
  }
};

// Per-step condition 8*p + 1 <= 3 behind the height supermartingale,
// checked by exact cross-multiplication.
bool supermartingale_step_ok(const Rat64& p);

// Audit a list of forced-step probabilities directly (negative controls).
AuditReport supermartingale_audit_probs(std::span<const Rat64> probs);

// Audit every steered step taken with |H| >= 1 while both halves were
// still active, deriving the forced probability from (pool, |H|).
AuditReport supermartingale_audit(const SteeredTrace& trace);

// Completed gaps (length >= 2) between consecutive balanced visits.
std::vector<std::int64_t> excursion_stats(const SteeredTrace& trace);

// Fraction of descent lengths exceeding limit steps.
AuditReport descent_audit(std::span<const std::int64_t> lengths, std::int64_t limit);

// Fraction of traces whose max |D| exceeds 4*sqrt(m ln m).
AuditReport deviation_audit(std::span<const SteeredTrace> traces, std::int64_t m);
double deviation_bound(std::int64_t m);

}  // namespace chainbal

#include "chainbal/birth_death.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "chainbal/errors.hpp"

namespace chainbal {

BirthDeathParams::BirthDeathParams(Rat64 p) : up(p) {
  if (p.num <= 0) throw domain_error("up probability must be positive");
  if (2 * p.num >= p.den) throw domain_error("up probability must be < 1/2");
}

std::optional<std::int64_t> bd_sample_first_passage(const BirthDeathParams& params,
                                                    Rng& rng) {
  if (2 * params.up.num >= params.up.den)
    throw domain_error("up probability must be < 1/2");
  const std::uint64_t num = static_cast<std::uint64_t>(params.up.num);
  const std::uint64_t den = static_cast<std::uint64_t>(params.up.den);
  std::int64_t h = 1, steps = 0;
  while (h > 0) {
    if (++steps > kFirstPassageStepCap) return std::nullopt;
    h += rng.bernoulli(num, den) ? 1 : -1;
  }
  return steps;
}

double PmfEntry::value() const {
  // num/den can both overflow double range; compare bit lengths first.
  const std::size_t nb = num.bit_length(), db = den.bit_length();
  if (db < 900) return num.to_double() / den.to_double();
  if (nb + 1000 < db) return 0.0;
  // Shift both down so the denominator fits comfortably in double range.
  const std::uint64_t shift = static_cast<std::uint64_t>(db - 512);
  BigUint n2 = num, d2 = den;
  // Dividing by 2^shift via repeated small divides keeps this exact enough:
  // use a power-of-two small divisor in 62-bit chunks.
  std::uint64_t left = shift;
  while (left > 0) {
    std::uint64_t chunk = std::min<std::uint64_t>(left, 62);
    n2.div_small(std::uint64_t{1} << chunk);
    d2.div_small(std::uint64_t{1} << chunk);
    left -= chunk;
  }
  return n2.to_double() / d2.to_double();
}

std::vector<PmfEntry> bd_first_passage_pmf(const BirthDeathParams& params,
                                           std::int64_t t_max) {
  if (t_max < 1) throw domain_error("t_max must be >= 1");
  if (t_max > 5001) throw capacity_error("exact pmf capped at t_max <= 5001");
  const std::uint64_t a = static_cast<std::uint64_t>(params.up.num);
  const std::uint64_t b = static_cast<std::uint64_t>(params.up.den);
  if (a == 0 || a >= b) throw domain_error("up probability must lie in (0,1)");

  // A[k] is the numerator for t = 2k+1 over denominator b^(2k+1).
  const std::size_t kmax = static_cast<std::size_t>((t_max - 1) / 2);
  std::vector<BigUint> A(kmax + 1);
  A[0] = b - a;
  for (std::size_t k = 1; k <= kmax; ++k) {
    // First passage decomposes at an initial up step into two independent
    // passages of odd lengths u and v with u + v = t - 1.
    BigUint sum;
    for (std::size_t i = 0; i < k; ++i) sum += A[i] * A[k - 1 - i];
    sum.mul_small(a);
    A[k] = std::move(sum);
  }
  std::vector<PmfEntry> out;
  out.reserve(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    PmfEntry e;
    e.t = static_cast<std::int64_t>(2 * k + 1);
    e.num = std::move(A[k]);
    e.den = BigUint::pow(b, static_cast<std::uint64_t>(e.t));
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<PmfEntry> bd_first_passage_pmf_by_enumeration(const BirthDeathParams& params,
                                                          std::int64_t t_max) {
  if (t_max < 1) throw domain_error("t_max must be >= 1");
  if (t_max > 23) throw capacity_error("path enumeration capped at t_max <= 23");
  const std::uint64_t a = static_cast<std::uint64_t>(params.up.num);
  const std::uint64_t b = static_cast<std::uint64_t>(params.up.den);

  std::vector<PmfEntry> out;
  for (std::int64_t t = 1; t <= t_max; t += 2) {
    // Count length-t walks from 1 that stay >= 1 before hitting 0 at t.
    // Every such walk has (t-1)/2 up steps.
    std::uint64_t count = 0;
    const std::uint64_t paths = std::uint64_t{1} << (t - 1);
    for (std::uint64_t bits = 0; bits < paths; ++bits) {
      std::int64_t h = 1;
      bool ok = true;
      for (std::int64_t s = 0; s < t - 1; ++s) {
        h += ((bits >> s) & 1) ? 1 : -1;
        if (h < 1) {
          ok = false;
          break;
        }
      }
      if (ok && h == 1) ++count;  // final forced down step reaches 0 at time t
    }
    PmfEntry e;
    e.t = t;
    e.num = BigUint(count) * BigUint::pow(a, static_cast<std::uint64_t>((t - 1) / 2)) *
            BigUint::pow(b - a, static_cast<std::uint64_t>((t + 1) / 2));
    e.den = BigUint::pow(b, static_cast<std::uint64_t>(t));
    out.push_back(std::move(e));
  }
  return out;
}

double pgf_closed_form(double s, const BirthDeathParams& params) {
  const double p = params.up.value();
  const double q = 1.0 - p;
  if (s == 0.0) return 0.0;
  const double disc = 1.0 - 4.0 * p * q * s * s;
  if (disc < -1e-12) throw domain_error("pgf argument outside radius of convergence");
  return (1.0 - std::sqrt(std::max(disc, 0.0))) / (2.0 * p * s);
}

double pgf_series(double s, const BirthDeathParams& params, std::int64_t t_max) {
  const double p = params.up.value();
  const double q = 1.0 - p;
  double term = q * s;  // t = 1
  double sum = 0.0;
  std::int64_t k = 1;
  for (std::int64_t t = 1; t <= t_max; t += 2, ++k) {
    sum += term;
    // Pr[t+2]/Pr[t] = Catalan ratio 2(2k-1)/(k+1) times p*q, and s^2.
    term *= 2.0 * static_cast<double>(2 * k - 1) / static_cast<double>(k + 1) * p * q * s * s;
  }
  return sum;
}

TailRates tail_rates() {
  TailRates r;
  r.decay_rate = std::log(2.0) - 0.5 * std::log(3.0);
  r.tail_base = std::sqrt(3.0) / 2.0;
  r.mgf_limit = std::sqrt(3.0);
  r.descent_base = 81.0 * std::sqrt(3.0) / 256.0;
  return r;
}

double mgf_at_gamma(const BirthDeathParams& params, std::int64_t k_max) {
  if (k_max < 1) throw domain_error("k_max must be >= 1");
  const double p = params.up.value();
  const double q = 1.0 - p;
  const double boost = std::exp(2.0 * tail_rates().decay_rate);  // e^{2 gamma} = 4/3
  long double term = static_cast<long double>(q) * std::exp(tail_rates().decay_rate);
  long double sum = 0.0L;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    sum += term;
    term *= 2.0L * static_cast<long double>(2 * k - 1) / static_cast<long double>(k + 1) *
            p * q * boost;
  }
  return static_cast<double>(sum);
}

double MgfPartialExact::value() const {
  // sqrt(3) * num / 2^log2_den with num up to ~2^(2*k_max).
  BigUint n = num;
  std::int64_t den = log2_den;
  // Keep ~64 significant bits.
  const std::int64_t drop = static_cast<std::int64_t>(n.bit_length()) - 62;
  if (drop > 0) {
    std::int64_t left = drop;
    while (left > 0) {
      std::int64_t chunk = std::min<std::int64_t>(left, 62);
      n.div_small(std::uint64_t{1} << chunk);
      left -= chunk;
    }
    den -= drop;
  }
  return std::sqrt(3.0) * n.to_double() * std::pow(2.0, -static_cast<double>(den));
}

MgfPartialExact mgf_at_gamma_exact(const BirthDeathParams& params, std::int64_t k_max) {
  if (!(params.up == Rat64(1, 4)))
    throw domain_error("exact exponential-moment sums require p = 1/4");
  if (k_max < 1) throw domain_error("k_max must be >= 1");
  // Term k equals sqrt(3) * Cat(k-1) / 2^(2k-1): accumulate the rational
  // coefficient over the common denominator 2^(2*k_max - 1).
  MgfPartialExact out;
  out.log2_den = 2 * k_max - 1;
  BigUint cat = 1;  // Cat(k-1), updated by the exact ratio 2(2k-1)/(k+1)
  for (std::int64_t k = 1; k <= k_max; ++k) {
    BigUint term = cat;
    term <<= static_cast<std::uint64_t>(2 * (k_max - k));
    out.num += term;
    std::uint64_t rem = 0;
    cat.mul_small(static_cast<std::uint64_t>(2 * (2 * k - 1)));
    cat.div_small(static_cast<std::uint64_t>(k + 1), &rem);
    if (rem != 0) throw state_error("Catalan recurrence must divide exactly");
  }
  return out;
}

bool supermartingale_step_ok(const Rat64& p) {
  // 8p + 1 <= 3  <=>  4 * num <= den  (den > 0 after normalization).
  return 4 * static_cast<__int128>(p.num) <= static_cast<__int128>(p.den);
}

namespace {

void observe_excess(AuditReport& r, double excess) {
  r.worst_margin = r.samples == 1 ? excess : std::max(r.worst_margin, excess);
}

}  // namespace

AuditReport supermartingale_audit_probs(std::span<const Rat64> probs) {
  AuditReport r;
  for (const Rat64& p : probs) {
    ++r.samples;
    observe_excess(r, (8.0 * p.value() + 1.0) - 3.0);
    if (!supermartingale_step_ok(p)) ++r.violations;
  }
  return r;
}

AuditReport supermartingale_audit(const SteeredTrace& trace) {
  AuditReport r;
  GridPosition pos = trace.start;
  int h = trace.h0;
  std::int64_t pool = trace.pool0;
  for (const SteeredStep& s : trace.steps) {
    const bool both_active =
        pos.a < trace.seg.left_size() && pos.b < trace.seg.right_size();
    if (both_active && std::abs(h) >= 1) {
      const Rat64 p = forced_probability(pool, std::abs(h));
      ++r.samples;
      observe_excess(r, (8.0 * p.value() + 1.0) - 3.0);
      if (!supermartingale_step_ok(p)) ++r.violations;
    }
    if (s.block == 0)
      pos.a += 1;
    else
      pos.b += 1;
    h = s.imbalance_after;
    pool = s.pool_after;
  }
  return r;
}

std::vector<std::int64_t> excursion_stats(const SteeredTrace& trace) {
  std::vector<std::int64_t> out;
  const auto& v = trace.balanced_visits;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] - v[i - 1] > 1) out.push_back(v[i] - v[i - 1]);
  }
  return out;
}

AuditReport descent_audit(std::span<const std::int64_t> lengths, std::int64_t limit) {
  AuditReport r;
  for (std::int64_t len : lengths) {
    ++r.samples;
    observe_excess(r, static_cast<double>(len - limit));
    if (len > limit) ++r.violations;
  }
  return r;
}

double deviation_bound(std::int64_t m) {
  if (m < 2) return 0.0;
  const double dm = static_cast<double>(m);
  return 4.0 * std::sqrt(dm * std::log(dm));
}

AuditReport deviation_audit(std::span<const SteeredTrace> traces, std::int64_t m) {
  AuditReport r;
  const double bound = deviation_bound(m);
  for (const SteeredTrace& tr : traces) {
    std::int64_t worst = 0;
    for (const SteeredStep& s : tr.steps)
      worst = std::max<std::int64_t>(worst, std::abs(s.deviation_after));
    ++r.samples;
    observe_excess(r, static_cast<double>(worst) - bound);
    if (static_cast<double>(worst) > bound) ++r.violations;
  }
  return r;
}

}  // namespace chainbal

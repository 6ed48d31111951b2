// test_birth_death.cpp -- first-passage pmf, generating function, moments,
// and the statistical audits.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chainbal/birth_death.hpp"
#include "chainbal/errors.hpp"
#include "chainbal/rng.hpp"

using namespace chainbal;

namespace {

const BirthDeathParams kQuarter{Rat64(1, 4)};

}  // namespace

TEST_CASE("up probabilities are confined to (0, 1/2)") {
  CHECK_NOTHROW(BirthDeathParams{Rat64(1, 4)});
  CHECK_NOTHROW(BirthDeathParams{Rat64(9, 20)});
  CHECK_THROWS_AS(BirthDeathParams{Rat64(1, 2)}, domain_error);
  CHECK_THROWS_AS(BirthDeathParams{Rat64(3, 5)}, domain_error);
  CHECK_THROWS_AS(BirthDeathParams{Rat64(0, 1)}, domain_error);
}

TEST_CASE("exact pmf starts 3/4, 9/64, 54/1024") {
  std::vector<PmfEntry> pmf = bd_first_passage_pmf(kQuarter, 5);
  REQUIRE(pmf.size() == 3);
  CHECK(pmf[0].t == 1);
  CHECK(pmf[0].num.decimal() == "3");
  CHECK(pmf[0].den.decimal() == "4");
  CHECK(pmf[0].value() == doctest::Approx(0.75));
  CHECK(pmf[1].t == 3);
  CHECK(pmf[1].num.decimal() == "9");
  CHECK(pmf[1].den.decimal() == "64");
  CHECK(pmf[2].t == 5);
  CHECK(pmf[2].num.decimal() == "54");
  CHECK(pmf[2].den.decimal() == "1024");
  CHECK(pmf[2].value() == doctest::Approx(27.0 / 512.0));

  std::vector<PmfEntry> third = bd_first_passage_pmf(BirthDeathParams{Rat64(1, 3)}, 1);
  CHECK(third[0].num.decimal() == "2");
  CHECK(third[0].den.decimal() == "3");
}

TEST_CASE("branching recursion agrees with brute path enumeration") {
  for (Rat64 p : {Rat64(1, 4), Rat64(2, 5)}) {
    BirthDeathParams params{p};
    std::vector<PmfEntry> rec = bd_first_passage_pmf(params, 15);
    std::vector<PmfEntry> enu = bd_first_passage_pmf_by_enumeration(params, 15);
    REQUIRE(rec.size() == enu.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
      CAPTURE(i);
      CHECK(rec[i].t == enu[i].t);
      CHECK(rec[i].num == enu[i].num);
      CHECK(rec[i].den == enu[i].den);
    }
  }
}

TEST_CASE("pmf caps and argument checks") {
  CHECK_THROWS_AS(bd_first_passage_pmf(kQuarter, 0), domain_error);
  CHECK_THROWS_AS(bd_first_passage_pmf(kQuarter, 5003), capacity_error);
  CHECK_THROWS_AS(bd_first_passage_pmf_by_enumeration(kQuarter, 25), capacity_error);
}

TEST_CASE("pmf values survive huge power-of-four denominators") {
  std::vector<PmfEntry> pmf = bd_first_passage_pmf(kQuarter, 501);
  double sum = 0.0;
  double term = 0.75;  // Pr[tau = 1], then the Catalan-step ratio
  std::int64_t k = 1;
  for (const PmfEntry& e : pmf) {
    double v = e.value();
    CHECK(v == doctest::Approx(term).epsilon(1e-9));
    sum += v;
    term *= 2.0 * static_cast<double>(2 * k - 1) / static_cast<double>(k + 1) * (3.0 / 16.0);
    ++k;
  }
  CHECK(sum < 1.0);
  CHECK(sum > 1.0 - 1e-6);
}

TEST_CASE("closed-form generating function hits its landmarks") {
  CHECK(pgf_closed_form(0.0, kQuarter) == 0.0);
  CHECK(pgf_closed_form(1.0, kQuarter) == doctest::Approx(1.0));
  const double radius = 2.0 / std::sqrt(3.0);
  CHECK(pgf_closed_form(radius, kQuarter) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(pgf_closed_form(1.2 * radius, kQuarter), domain_error);
}

TEST_CASE("series and closed form agree inside the radius") {
  for (double s : {0.25, 0.5, 0.9}) {
    CAPTURE(s);
    double series = pgf_series(s, kQuarter, 2001);
    double closed = pgf_closed_form(s, kQuarter);
    CHECK(std::abs(series - closed) <= 1e-6);
  }
  CHECK(pgf_series(0.5, kQuarter, 2001) == doctest::Approx(0.394448724534).epsilon(1e-9));
}

TEST_CASE("tail rates are the quarter-walk constants") {
  TailRates r = tail_rates();
  CHECK(r.decay_rate == doctest::Approx(0.14384103622589045).epsilon(1e-14));
  CHECK(r.tail_base == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(r.mgf_limit == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r.descent_base == doctest::Approx(81.0 * std::sqrt(3.0) / 256.0).epsilon(1e-14));
  CHECK(r.descent_base == doctest::Approx(0.54803170083).epsilon(1e-10));
  // Consistency: e^{-rate} is the base and the descent base telescopes
  // the one-level moment across eight halvings.
  CHECK(std::exp(-r.decay_rate) == doctest::Approx(r.tail_base).epsilon(1e-14));
  CHECK(r.mgf_limit * std::pow(r.tail_base, 8) ==
        doctest::Approx(r.descent_base).epsilon(1e-14));
}

TEST_CASE("exponential moment sums climb monotonically to sqrt(3)") {
  const double limit = std::sqrt(3.0);
  CHECK(mgf_at_gamma(kQuarter, 1) == doctest::Approx(limit / 2.0).epsilon(1e-12));
  double prev = 0.0;
  for (std::int64_t k : {10, 100, 1000, 10000}) {
    double v = mgf_at_gamma(kQuarter, k);
    CHECK(v > prev);
    CHECK(v < limit);
    prev = v;
  }
  CHECK(prev > limit - 0.02);
  CHECK_THROWS_AS(mgf_at_gamma(kQuarter, 0), domain_error);
}

TEST_CASE("exact exponential moment sums match the dyadic arithmetic") {
  MgfPartialExact one = mgf_at_gamma_exact(kQuarter, 1);
  CHECK(one.num.decimal() == "1");
  CHECK(one.log2_den == 1);
  CHECK(one.value() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  // k = 5 by hand: 1/2 + 1/8 + 1/16 + 5/128 + 7/256 = 193/256 = 386/512.
  MgfPartialExact five = mgf_at_gamma_exact(kQuarter, 5);
  CHECK(five.num.decimal() == "386");
  CHECK(five.log2_den == 9);
  CHECK(five.value() == doctest::Approx(std::sqrt(3.0) * 193.0 / 256.0).epsilon(1e-12));

  // The double route is a rounding of the exact one.
  MgfPartialExact big = mgf_at_gamma_exact(kQuarter, 200);
  CHECK(big.value() == doctest::Approx(mgf_at_gamma(kQuarter, 200)).epsilon(1e-9));

  CHECK_THROWS_AS(mgf_at_gamma_exact(BirthDeathParams{Rat64(1, 3)}, 5), domain_error);
}

TEST_CASE("sampled passages look like the pmf") {
  Rng rng(derive_seed(7, 0, 0));
  const int trials = 20000;
  std::int64_t ones = 0;
  double mean = 0.0;
  for (int i = 0; i < trials; ++i) {
    auto tau = bd_sample_first_passage(kQuarter, rng);
    REQUIRE(tau.has_value());
    CHECK(*tau % 2 == 1);
    ones += *tau == 1 ? 1 : 0;
    mean += static_cast<double>(*tau);
  }
  mean /= trials;
  // E tau = 1/(q - p) = 2 and Pr[tau = 1] = 3/4.
  CHECK(mean == doctest::Approx(2.0).epsilon(0.05));
  CHECK(static_cast<double>(ones) / trials == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("step condition is exactly p <= 1/4") {
  CHECK(supermartingale_step_ok(Rat64(1, 4)));
  CHECK(supermartingale_step_ok(Rat64::zero()));
  CHECK(supermartingale_step_ok(Rat64(24, 100)));
  CHECK(!supermartingale_step_ok(Rat64(26, 100)));
  CHECK(!supermartingale_step_ok(Rat64(3, 10)));
}

TEST_CASE("direct probability audit flags exactly the bad steps") {
  std::vector<Rat64> probs = {Rat64(1, 4), Rat64(3, 10), Rat64(1, 8)};
  AuditReport r = supermartingale_audit_probs(probs);
  CHECK(r.samples == 3);
  CHECK(r.violations == 1);
  CHECK(r.worst_margin == doctest::Approx(0.4));
  CHECK(r.fraction() == doctest::Approx(1.0 / 3.0));

  AuditReport empty = supermartingale_audit_probs({});
  CHECK(empty.samples == 0);
  CHECK(empty.fraction() == 0.0);
}

TEST_CASE("excursion stats keep only gaps of two or more") {
  SteeredTrace tr;
  tr.balanced_visits = {0, 1, 5, 6, 9};
  CHECK(excursion_stats(tr) == std::vector<std::int64_t>{4, 3});
  tr.balanced_visits = {0, 1, 2};
  CHECK(excursion_stats(tr).empty());
  tr.balanced_visits.clear();
  CHECK(excursion_stats(tr).empty());
}

TEST_CASE("descent audit counts lengths over the limit") {
  std::vector<std::int64_t> lengths = {5, 10, 4};
  AuditReport r = descent_audit(lengths, 5);
  CHECK(r.samples == 3);
  CHECK(r.violations == 1);
  CHECK(r.worst_margin == doctest::Approx(5.0));
}

TEST_CASE("deviation bound and audit") {
  const std::int64_t m = 128;
  const double bound = deviation_bound(m);
  CHECK(bound == doctest::Approx(4.0 * std::sqrt(128.0 * std::log(128.0))));
  CHECK(bound < static_cast<double>(m));

  // Synthetic runaway: m straight left steps push D to m, over the bound.
  SteeredTrace runaway;
  runaway.seg = Segment{0, 2 * static_cast<int>(m)};
  for (std::int64_t t = 1; t <= m; ++t) {
    SteeredStep s{};
    s.block = 0;
    s.fvalue = static_cast<std::int8_t>(t % 2 == 1 ? 1 : -1);
    s.imbalance_after = t % 2;
    s.deviation_after = static_cast<std::int32_t>(t);
    s.pool_after = 2 * m - t;
    runaway.steps.push_back(s);
  }
  std::vector<SteeredTrace> bad = {runaway};
  AuditReport flagged = deviation_audit(bad, m);
  CHECK(flagged.samples == 1);
  CHECK(flagged.violations == 1);
  CHECK(flagged.worst_margin == doctest::Approx(static_cast<double>(m) - bound));

  // Genuine steered runs at this size cannot even reach the bound.
  Rng rng(derive_seed(11, 0, 0));
  std::vector<SteeredTrace> good;
  for (int trial = 0; trial < 50; ++trial) {
    BalancedColoring f = random_balanced_coloring(GroundSize{static_cast<int>(m)}, rng);
    RngCoin coins(rng);
    good.push_back(run_segment(Segment{0, static_cast<int>(m)}, GridPosition{0, 0}, 0,
                               m, f, coins));
  }
  AuditReport clean = deviation_audit(good, m);
  CHECK(clean.samples == 50);
  CHECK(clean.violations == 0);
}

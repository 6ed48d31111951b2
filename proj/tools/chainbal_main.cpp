// chainbal_main.cpp -- experiment driver.
//
// Subcommands: cbal, build, martingale, mabp, reduce, enumerate,
// check-constants. Every run is reproducible from (arguments, seed): trials
// derive per-index seeds, workers write into index-addressed slots, and
// artifacts are serialized in index order, so --jobs never changes output.
// Exit codes: 0 success, 1 threshold failure, 2 usage/input error,
// 3 capacity exceeded.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainbal/birth_death.hpp"
#include "chainbal/builder.hpp"
#include "chainbal/config.hpp"
#include "chainbal/constants.hpp"
#include "chainbal/core.hpp"
#include "chainbal/errors.hpp"
#include "chainbal/io.hpp"
#include "chainbal/local_patterns.hpp"
#include "chainbal/mabp.hpp"
#include "chainbal/parallel.hpp"
#include "chainbal/reduction.hpp"
#include "chainbal/rng.hpp"

namespace cb = chainbal;

namespace {

// Sub-stream tags so no two commands reuse a trial's generator.
constexpr std::uint64_t kStreamBuild = 1;
constexpr std::uint64_t kStreamExcursion = 2;
constexpr std::uint64_t kStreamDescent = 3;
constexpr std::uint64_t kStreamDeviation = 4;
constexpr std::uint64_t kStreamSupermartingale = 5;
constexpr std::uint64_t kStreamMabp = 6;
constexpr std::uint64_t kStreamReduce = 7;

struct Options {
  std::string config_path;
  std::string profile = "paper";
  std::string out_dir = "out";
  std::uint64_t seed = cb::kDefaultSeed;
  std::int64_t trials = -1;  // -1: take the config default
  int jobs = 1;
};

std::string out_path(const Options& opt, const std::string& name) {
  return (std::filesystem::path(opt.out_dir) / name).string();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string set_text(cb::Mask m) {
  std::string s = "{";
  for (int i = 0; i < 32; ++i) {
    if (m & (cb::Mask{1} << i)) {
      if (s.size() > 1) s += ',';
      s += std::to_string(i + 1);
    }
  }
  return s + "}";
}

cb::SetSystem power_set(int n) {
  if (n < 1 || n > 20) throw cb::input_error("power set ground size must lie in [1, 20]");
  std::vector<cb::Mask> sets(std::size_t{1} << n);
  for (std::size_t i = 0; i < sets.size(); ++i) sets[i] = static_cast<cb::Mask>(i);
  return cb::SetSystem(n, std::move(sets));
}

int cmd_cbal(const Options&, const cb::Config&, const std::string& file) {
  cb::SetSystem X = cb::load_system(file);
  int balance = cb::chain_balance(X);
  std::printf("cbal=%d\n", balance);
  for (int k = 0; k <= balance; ++k) {
    cb::Fraction eps = cb::average_case_epsilon(X, k);
    std::printf("eps(%d)=%s\n", k, eps.str().c_str());
  }
  return 0;
}

int cmd_build(const Options& opt, const cb::Config& cfg, int n, std::int64_t trace_trials) {
  if (n < 2 || n % 2 != 0) throw cb::input_error("n must be even and >= 2");
  const cb::ConstantsProfile& prof = cb::profile_or_throw(cfg, opt.profile);
  std::int64_t trials = opt.trials >= 0 ? opt.trials : cfg.build.trials;
  if (trials == 0) {
    cb::write_text_file(out_path(opt, "build_summary.csv"), cb::outcomes_csv_header());
    std::fprintf(stderr, "error: trials must be >= 1\n");
    return 2;
  }
  if (trials < 0) throw cb::input_error("trials must be >= 0");

  cb::HypothesisReport hyp = cb::check_hypotheses(prof, n);
  if (!hyp.ok)
    std::fprintf(stderr,
                 "warning: profile margins go negative (H1 %.2f at m=%lld, H2 %.2f at "
                 "m=%lld); audit failures are expected\n",
                 hyp.h1_worst, static_cast<long long>(hyp.h1_worst_at), hyp.h2_worst,
                 static_cast<long long>(hyp.h2_worst_at));

  auto run_trial = [&](std::uint64_t index) {
    cb::Rng rng(cb::derive_seed(opt.seed, index, kStreamBuild));
    cb::BalancedColoring f = cb::random_balanced_coloring(cb::GroundSize{n}, rng);
    cb::BuilderTrace trace = cb::build_chain(f, prof, rng);
    return std::make_pair(std::move(f), std::move(trace));
  };

  std::vector<cb::BuildOutcome> outcomes(static_cast<std::size_t>(trials));
  cb::parallel_for(static_cast<std::size_t>(trials), opt.jobs, [&](std::size_t i) {
    auto [f, trace] = run_trial(i);
    cb::Verdict verdict = cb::verify_trace(trace, f, prof);
    cb::BuildOutcome& o = outcomes[i];
    o.trial = i;
    o.success = trace.success;
    o.verified = trace.success && verdict.pass;
    o.reason = trace.reason;
    o.scales = static_cast<int>(trace.scales.size());
    for (const cb::ScaleRecord& rec : trace.scales) {
      o.max_height = std::max(o.max_height, rec.max_height);
      o.max_gap = std::max(o.max_gap, rec.max_gap);
    }
  });

  std::string csv = cb::outcomes_csv_header();
  for (const cb::BuildOutcome& o : outcomes) csv += cb::outcome_to_csv_row(o);
  cb::write_text_file(out_path(opt, "build_summary.csv"), csv);

  // Trace dump: the first trace_trials trials plus the first 20 failures,
  // re-run serially (cheap next to the campaign, independent of --jobs).
  std::vector<std::uint64_t> dump;
  for (std::int64_t i = 0; i < std::min(trials, trace_trials); ++i)
    dump.push_back(static_cast<std::uint64_t>(i));
  int failures_dumped = 0;
  for (const cb::BuildOutcome& o : outcomes) {
    if (o.verified || failures_dumped >= 20) continue;
    if (o.trial >= static_cast<std::uint64_t>(trace_trials)) {
      dump.push_back(o.trial);
      ++failures_dumped;
    }
  }
  std::string jsonl;
  for (std::uint64_t index : dump) {
    auto [f, trace] = run_trial(index);
    jsonl += cb::builder_trace_to_jsonl(trace, f, static_cast<std::int64_t>(index));
  }
  cb::write_text_file(out_path(opt, "traces.jsonl"), jsonl);

  std::int64_t verified = 0;
  for (const cb::BuildOutcome& o : outcomes) verified += o.verified ? 1 : 0;
  double fraction = static_cast<double>(verified) / static_cast<double>(trials);
  std::printf("trials=%lld verified=%lld\n", static_cast<long long>(trials),
              static_cast<long long>(verified));
  std::printf("success_fraction=%.5f\n", fraction);
  return fraction >= cfg.build.success_threshold ? 0 : 1;
}

// Steered traces over a fresh random coloring per trial, for the suites
// that audit the real path rather than the reference chain.
std::vector<cb::SteeredTrace> walk_traces(const Options& opt, const cb::Config& cfg,
                                          std::uint64_t stream) {
  const std::int64_t m = cfg.martingale.walk_m;
  const std::int64_t trials = cfg.martingale.walk_trials;
  if (m < 2 || m % 2 != 0) throw cb::input_error("walk_m must be even and >= 2");
  if (trials < 1) throw cb::input_error("walk_trials must be >= 1");
  std::vector<cb::SteeredTrace> traces(static_cast<std::size_t>(trials));
  cb::parallel_for(static_cast<std::size_t>(trials), opt.jobs, [&](std::size_t i) {
    cb::Rng rng(cb::derive_seed(opt.seed, i, stream));
    cb::BalancedColoring f =
        cb::random_balanced_coloring(cb::GroundSize{static_cast<int>(m)}, rng);
    cb::RngCoin coins(rng);
    traces[i] = cb::run_segment(cb::Segment{0, static_cast<int>(m)}, cb::GridPosition{},
                                0, m, f, coins);
  });
  return traces;
}

int finish_suite(const Options& opt, const std::string& suite, const cb::Json& report,
                 bool pass) {
  cb::write_text_file(out_path(opt, suite + "_report.json"), report.dump(2) + "\n");
  std::printf("suite=%s pass=%d\n", suite.c_str(), pass ? 1 : 0);
  return pass ? 0 : 1;
}

int cmd_martingale(const Options& opt, const cb::Config& cfg, const std::string& suite,
                   bool negative_control) {
  const cb::MartingaleConfig& mc = cfg.martingale;
  const cb::TailRates rates = cb::tail_rates();
  if (negative_control && suite != "excursion" && suite != "supermartingale")
    throw cb::input_error("--negative-control applies to excursion and supermartingale");

  if (suite == "pgf") {
    cb::BirthDeathParams params;
    cb::Json points = cb::Json::array();
    bool pass = true;
    for (double s : mc.pgf_points) {
      double closed = cb::pgf_closed_form(s, params);
      double series = cb::pgf_series(s, params, mc.pmf_t_max);
      double delta = std::abs(closed - series);
      if (delta > mc.pgf_tolerance) pass = false;
      points.push_back(cb::Json{{"s", s},
                                {"closed_form", closed},
                                {"series", series},
                                {"delta", delta}});
      std::printf("s=%s closed=%s series=%s delta=%s\n", fmt("%.4g", s).c_str(),
                  fmt("%.12f", closed).c_str(), fmt("%.12f", series).c_str(),
                  fmt("%.3g", delta).c_str());
    }
    auto pmf = cb::bd_first_passage_pmf(params, std::min<std::int64_t>(mc.pmf_t_max, 99));
    cb::write_text_file(out_path(opt, "first_passage_pmf.csv"), cb::pmf_to_csv(pmf));
    cb::Json report{{"suite", suite},
                    {"pass", pass},
                    {"t_max", mc.pmf_t_max},
                    {"tolerance", mc.pgf_tolerance},
                    {"points", points}};
    return finish_suite(opt, suite, report, pass);
  }

  if (suite == "mgf") {
    cb::BirthDeathParams params;
    std::vector<std::int64_t> horizons{1, 10, 100, 1000, mc.mgf_k_max};
    horizons.erase(std::remove_if(horizons.begin(), horizons.end(),
                                  [&](std::int64_t k) { return k > mc.mgf_k_max; }),
                   horizons.end());
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
    bool monotone = true;
    double prev = 0.0;
    cb::Json steps = cb::Json::array();
    double value = 0.0;
    for (std::int64_t k : horizons) {
      value = cb::mgf_at_gamma_exact(params, k).value();
      if (value + 1e-15 < prev) monotone = false;
      prev = value;
      steps.push_back(cb::Json{{"k_max", k}, {"partial_sum", value}});
    }
    double gap = rates.mgf_limit - value;
    bool pass = monotone && gap >= -1e-12 && gap <= mc.mgf_tolerance;
    std::printf("partial_sum=%.10f limit=%.10f gap=%.3g monotone=%d\n", value,
                rates.mgf_limit, gap, monotone ? 1 : 0);
    cb::Json report{{"suite", suite},       {"pass", pass},
                    {"k_max", mc.mgf_k_max}, {"partial_sum", value},
                    {"limit", rates.mgf_limit}, {"gap", gap},
                    {"monotone", monotone}, {"steps", steps}};
    return finish_suite(opt, suite, report, pass);
  }

  if (suite == "excursion") {
    // The biased sampler drifts down far slower (up probability 9/20), so
    // its survival curve overshoots the envelope from t around 20 on.
    cb::BirthDeathParams params =
        negative_control ? cb::BirthDeathParams{cb::Rat64(9, 20)} : cb::BirthDeathParams{};
    cb::Rng rng(cb::derive_seed(opt.seed, 0, kStreamExcursion));
    const std::int64_t t_max = mc.excursion_t_max;
    std::vector<std::int64_t> survivors(static_cast<std::size_t>(t_max) + 1, 0);
    std::int64_t aborts = 0;
    for (std::int64_t i = 0; i < mc.excursion_samples; ++i) {
      auto tau = cb::bd_sample_first_passage(params, rng);
      std::int64_t top = tau ? std::min(*tau - 1, t_max) : t_max;
      if (!tau) ++aborts;
      for (std::int64_t t = 1; t <= top; ++t) ++survivors[static_cast<std::size_t>(t)];
    }
    bool flagged = false;
    double worst_ratio = 0.0;
    std::string csv = "t,empirical,envelope\n";
    for (std::int64_t t = 1; t <= t_max; ++t) {
      double empirical = static_cast<double>(survivors[static_cast<std::size_t>(t)]) /
                         static_cast<double>(mc.excursion_samples);
      double envelope = 1.5 * std::pow(rates.tail_base, static_cast<double>(t));
      worst_ratio = std::max(worst_ratio, empirical / envelope);
      if (empirical > mc.excursion_slack * envelope) flagged = true;
      csv += std::to_string(t) + ',' + fmt("%.9f", empirical) + ',' +
             fmt("%.9f", envelope) + '\n';
    }
    cb::write_text_file(out_path(opt, "excursion_survival.csv"), csv);
    bool pass = negative_control ? flagged : !flagged;
    std::printf("samples=%lld aborts=%lld worst_ratio=%.4f flagged=%d\n",
                static_cast<long long>(mc.excursion_samples),
                static_cast<long long>(aborts), worst_ratio, flagged ? 1 : 0);
    cb::Json report{{"suite", suite},
                    {"pass", pass},
                    {"negative_control", negative_control},
                    {"flagged", flagged},
                    {"samples", mc.excursion_samples},
                    {"aborts", aborts},
                    {"t_max", t_max},
                    {"slack", mc.excursion_slack},
                    {"worst_ratio", worst_ratio}};
    return finish_suite(opt, suite, report, pass);
  }

  if (suite == "descent") {
    const cb::ConstantsProfile& prof = cb::profile_or_throw(cfg, opt.profile);
    const int h0 = mc.descent_h0;
    if (h0 < 1) throw cb::input_error("descent_h0 must be >= 1");
    const std::int64_t limit = static_cast<std::int64_t>(prof.descent_coeff) * h0;
    // Dropping from h0 to 1 is h0 - 1 unit descents, each one first passage.
    std::vector<std::int64_t> lengths(static_cast<std::size_t>(mc.descent_samples));
    cb::parallel_for(lengths.size(), opt.jobs, [&](std::size_t i) {
      cb::Rng rng(cb::derive_seed(opt.seed, i, kStreamDescent));
      cb::BirthDeathParams params;
      std::int64_t total = 0;
      for (int h = 1; h < h0; ++h) {
        auto tau = cb::bd_sample_first_passage(params, rng);
        total += tau ? *tau : cb::kFirstPassageStepCap;  // abort counts as exceedance
      }
      lengths[i] = total;
    });
    cb::AuditReport audit = cb::descent_audit(lengths, limit);
    double bound = std::pow(rates.descent_base, h0) / rates.mgf_limit;
    double threshold = mc.descent_slack * bound;
    bool pass = audit.fraction() <= threshold;
    std::printf("samples=%lld limit=%lld exceedance=%.6f bound=%.6f threshold=%.6f\n",
                static_cast<long long>(audit.samples), static_cast<long long>(limit),
                audit.fraction(), bound, threshold);
    cb::Json report = cb::audit_to_json(audit);
    report["suite"] = suite;
    report["pass"] = pass;
    report["h0"] = h0;
    report["limit"] = limit;
    report["analytic_bound"] = bound;
    report["threshold"] = threshold;
    return finish_suite(opt, suite, report, pass);
  }

  if (suite == "deviation") {
    auto traces = walk_traces(opt, cfg, kStreamDeviation);
    cb::AuditReport audit = cb::deviation_audit(traces, mc.walk_m);
    bool pass = audit.violations == 0;
    std::printf("trials=%lld violations=%lld bound=%.2f\n",
                static_cast<long long>(audit.samples),
                static_cast<long long>(audit.violations),
                cb::deviation_bound(mc.walk_m));
    cb::Json report = cb::audit_to_json(audit);
    report["suite"] = suite;
    report["pass"] = pass;
    report["m"] = mc.walk_m;
    report["bound"] = cb::deviation_bound(mc.walk_m);
    return finish_suite(opt, suite, report, pass);
  }

  if (suite == "supermartingale") {
    cb::AuditReport audit;
    if (negative_control) {
      // 8 * (3/10) + 1 = 3.4 > 3 must be caught by the exact comparison.
      std::vector<cb::Rat64> probs{cb::Rat64(1, 4), cb::Rat64(3, 10)};
      audit = cb::supermartingale_audit_probs(probs);
    } else {
      auto traces = walk_traces(opt, cfg, kStreamSupermartingale);
      for (const cb::SteeredTrace& trace : traces) {
        cb::AuditReport one = cb::supermartingale_audit(trace);
        audit.samples += one.samples;
        audit.violations += one.violations;
        audit.worst_margin = std::max(audit.worst_margin, one.worst_margin);
      }
    }
    bool flagged = audit.violations > 0;
    bool pass = negative_control ? flagged : !flagged;
    std::printf("audited_steps=%lld violations=%lld flagged=%d\n",
                static_cast<long long>(audit.samples),
                static_cast<long long>(audit.violations), flagged ? 1 : 0);
    cb::Json report = cb::audit_to_json(audit);
    report["suite"] = suite;
    report["pass"] = pass;
    report["negative_control"] = negative_control;
    return finish_suite(opt, suite, report, pass);
  }

  throw cb::input_error("unknown suite \"" + suite +
                        "\" (expected pgf, mgf, excursion, descent, deviation, "
                        "supermartingale)");
}

int cmd_mabp(const Options& opt, const cb::Config& cfg, int n, const std::string& file,
             int block_size, bool dump_abp) {
  cb::SetSystem X = file.empty() ? power_set(n) : cb::load_system(file);
  if (X.n() % 2 != 0) throw cb::input_error("ground size must be even");
  if (X.n() > cb::kMaxExpansionGround)
    throw cb::capacity_error("expansion capped at n <= 12");
  cb::PrimeFieldConfig field{cfg.mabp.modulus};

  cb::RankReport report;
  for (int attempt = 0; attempt < cfg.mabp.retries; ++attempt) {
    cb::Rng rng(cb::derive_seed(opt.seed, attempt, kStreamMabp));
    report = cb::full_rank_check(X, rng, field, opt.jobs);
    if (report.pass || !report.precondition_ok) break;
    if (attempt + 1 < cfg.mabp.retries)
      std::fprintf(stderr, "note: rank deficit under weight draw %d; retrying\n",
                   attempt + 1);
  }
  for (std::size_t i = 0; i < report.partitions.size(); ++i) {
    const cb::PartitionRank& p = report.partitions[i];
    std::printf("partition %zu: side=%s rank=%d/%d %s\n", i,
                set_text(p.positive_side).c_str(), p.rank, p.expected,
                p.rank == p.expected ? "pass" : "FAIL");
  }
  cb::write_text_file(out_path(opt, "mabp_verdict.json"),
                      cb::rank_report_to_json(report).dump(2) + "\n");

  bool pass = report.pass;
  if (block_size > 0) {
    cb::Rng rng(cb::derive_seed(opt.seed, 1000, kStreamMabp));
    cb::RankReport sm = cb::sm_full_rank_check(X, block_size, rng, field, opt.jobs);
    for (std::size_t i = 0; i < sm.partitions.size(); ++i) {
      const cb::PartitionRank& p = sm.partitions[i];
      std::printf("sm partition %zu: side=%s rank=%d/%d %s\n", i,
                  set_text(p.positive_side).c_str(), p.rank, p.expected,
                  p.rank == p.expected ? "pass" : "FAIL");
    }
    cb::write_text_file(out_path(opt, "mabp_sm_verdict.json"),
                        cb::rank_report_to_json(sm).dump(2) + "\n");
    std::printf("sm_verdict=%s\n", sm.pass ? "PASS" : "FAIL");
    pass = pass && sm.pass;
  }
  if (dump_abp) {
    cb::Abp abp = cb::build_abp(X, cb::WeightAssignment::uniform(X.n(), 1), field);
    cb::write_text_file(out_path(opt, "abp.json"), cb::abp_to_json(abp).dump(2) + "\n");
  }

  if (report.pass) {
    std::printf("verdict=PASS\n");
  } else {
    cb::Mask worst = 0;
    for (const cb::PartitionRank& p : report.partitions)
      if (p.rank != p.expected && worst == 0) worst = p.positive_side;
    std::printf("verdict=FAIL failing_side=%s\n", set_text(worst).c_str());
  }
  return pass ? 0 : 1;
}

int cmd_reduce(const Options& opt, const cb::Config&, const std::string& file, int k,
               int c) {
  cb::SetSystem X = cb::load_system(file);
  cb::Fraction eps = cb::average_case_epsilon(X, k);
  std::uint64_t copies = cb::reduction_copies(X.n(), eps, c);
  cb::Rng rng(cb::derive_seed(opt.seed, 0, kStreamReduce));
  cb::SetSystem reduced = cb::reduce_to_worst_case(X, k, eps, c, rng);
  int balance = cb::chain_balance(reduced);
  std::printf("n=%d sets=%zu eps(%d)=%s copies=%llu reduced_sets=%zu cbal_reduced=%d\n",
              X.n(), X.size(), k, eps.str().c_str(),
              static_cast<unsigned long long>(copies), reduced.size(), balance);
  cb::save_system(out_path(opt, "reduced_system.json"), reduced);
  return balance <= k ? 0 : 1;
}

int cmd_enumerate(const Options& opt, const cb::Config& cfg, int n) {
  const cb::ConstantsProfile& prof = cb::profile_or_throw(cfg, opt.profile);
  cb::SetSystem family = cb::enumerate_composites(n, prof);
  cb::BigUint bound = cb::composite_count_bound(n, prof);
  bool within = cb::BigUint(family.size()) <= bound;
  std::printf("n=%d profile=%s composites=%zu\n", n, opt.profile.c_str(), family.size());
  std::printf("count_bound=%s within_bound=%d\n", bound.decimal().c_str(), within ? 1 : 0);
  cb::save_system(out_path(opt, "composites.json"), family);
  return within ? 0 : 1;
}

int cmd_check_constants(const Options& opt, const cb::Config& cfg) {
  const cb::ConstantsProfile& prof = cb::profile_or_throw(cfg, opt.profile);
  const cb::TailRates rates = cb::tail_rates();
  bool ok = true;
  auto check = [&](const char* name, bool cond, const std::string& detail) {
    ok = ok && cond;
    std::printf("%s %s %s\n", name, detail.c_str(), cond ? "ok" : "MISMATCH");
  };

  check("gamma", std::abs(rates.decay_rate - 0.1438) < 5e-5,
        fmt("%.6f", rates.decay_rate) + " ~ 0.1438");
  check("rho", std::abs(rates.tail_base - std::sqrt(3.0) / 2.0) < 1e-12,
        fmt("%.10f", rates.tail_base) + " = sqrt(3)/2");
  check("alpha", std::abs(rates.descent_base - 0.548) < 5e-4,
        fmt("%.7f", rates.descent_base) + " ~ 0.548");
  int c1 = static_cast<int>(std::ceil(4.0 / rates.decay_rate));
  check("gap_coefficient", c1 == 28, "ceil(4/gamma) = " + std::to_string(c1));
  check("rate_consistency",
        std::abs(std::exp(-rates.decay_rate) - rates.tail_base) < 1e-12 &&
            std::abs(rates.mgf_limit - std::sqrt(3.0)) < 1e-12,
        "exp(-gamma) = rho, limit = sqrt(3)");

  // Margin of the descent-headroom hypothesis at the recursion floor, and
  // of the residual-room hypothesis at half the floor.
  const double m0 = prof.base_threshold;
  double lhs1 = cb::h1_value(prof, prof.base_threshold) + m0 / 2.0 ;
  double rhs1 = m0 / 2.0;
  double lhs2 = m0 / 2.0 - std::pow(m0 / 2.0, 2.0 / 3.0);
  double rhs2 = prof.gap_coeff * std::log(m0 / 2.0);
  bool pinned = prof.height_coeff == 4 && prof.gap_coeff == 28 &&
                prof.descent_coeff == 8 && prof.base_threshold == 700;
  bool h1_ok = lhs1 >= rhs1;
  bool h2_ok = lhs2 >= rhs2;
  if (pinned) {
    h1_ok = h1_ok && std::llround(lhs1) == 378 && std::llround(rhs1) == 350;
    h2_ok = h2_ok && std::llround(lhs2) == 300 && std::llround(rhs2) == 164;
  }
  check("descent_headroom", h1_ok,
        fmt("%.0f", std::round(lhs1)) + " >= " + fmt("%.0f", std::round(rhs1)));
  check("residual_room", h2_ok,
        fmt("%.0f", std::round(lhs2)) + " >= " + fmt("%.0f", std::round(rhs2)));

  cb::HypothesisReport hyp = cb::check_hypotheses(prof, std::int64_t{1} << 20);
  check("hypothesis_scan", hyp.ok,
        "worst H1 " + fmt("%.2f", hyp.h1_worst) + ", worst H2 " + fmt("%.2f", hyp.h2_worst));

  cb::Json report{{"gamma", rates.decay_rate},
                  {"rho", rates.tail_base},
                  {"alpha", rates.descent_base},
                  {"mgf_limit", rates.mgf_limit},
                  {"gap_coefficient", c1},
                  {"h1_lhs", lhs1},
                  {"h1_rhs", rhs1},
                  {"h2_lhs", lhs2},
                  {"h2_rhs", rhs2},
                  {"h1_worst", hyp.h1_worst},
                  {"h2_worst", hyp.h2_worst},
                  {"profile", opt.profile},
                  {"pass", ok}};
  cb::write_text_file(out_path(opt, "constants.json"), report.dump(2) + "\n");
  std::printf("constants=%s\n", ok ? "PASS" : "FAIL");
  (void)cfg;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced-chain laboratory"};
  app.require_subcommand(1);
  Options opt;

  auto* seed_opt = app.add_option("--seed", opt.seed, "master seed (default from config)");
  app.add_option("--profile", opt.profile, "constants profile")->capture_default_str();
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--out-dir", opt.out_dir, "artifact directory")->capture_default_str();
  app.add_option("--trials", opt.trials, "trial count (default from config)");
  app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string cbal_file;
  CLI::App* cbal_cmd = app.add_subcommand("cbal", "chain balance and epsilon table");
  cbal_cmd->fallthrough();
  cbal_cmd->add_option("file", cbal_file, "set system JSON")->required();

  int build_n = 0;
  std::int64_t trace_trials = 1;
  CLI::App* build_cmd = app.add_subcommand("build", "multiscale chain-building campaign");
  build_cmd->fallthrough();
  build_cmd->add_option("--n", build_n, "ground size (default from config)");
  build_cmd->add_option("--trace-trials", trace_trials, "leading trials dumped as JSONL")
      ->capture_default_str();

  std::string suite;
  bool negative_control = false;
  CLI::App* mart_cmd = app.add_subcommand("martingale", "first-passage audit suites");
  mart_cmd->fallthrough();
  mart_cmd->add_option("suite", suite,
                       "pgf|mgf|excursion|descent|deviation|supermartingale")
      ->required();
  mart_cmd->add_flag("--negative-control", negative_control,
                     "run the deliberately biased variant and require detection");

  int mabp_n = 8;
  std::string mabp_file;
  int block_size = 0;
  bool dump_abp = false;
  CLI::App* mabp_cmd = app.add_subcommand("mabp", "full-rank certification");
  mabp_cmd->fallthrough();
  mabp_cmd->add_option("--n", mabp_n, "power-set ground size")->capture_default_str();
  mabp_cmd->add_option("--input", mabp_file, "set system JSON (overrides --n)");
  mabp_cmd->add_option("--block-size", block_size,
                       "also run the set-multilinear variant with this block size");
  mabp_cmd->add_flag("--dump-abp", dump_abp, "write the program structure as JSON");

  std::string reduce_file;
  int reduce_k = 1;
  int reduce_c = 8;
  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "average-case to worst-case reduction");
  reduce_cmd->fallthrough();
  reduce_cmd->add_option("file", reduce_file, "set system JSON")->required();
  reduce_cmd->add_option("--k", reduce_k, "balance level")->capture_default_str();
  reduce_cmd->add_option("--c", reduce_c, "copy multiplier")->capture_default_str();

  int enum_n = 8;
  CLI::App* enum_cmd = app.add_subcommand("enumerate", "composite pattern family");
  enum_cmd->fallthrough();
  enum_cmd->add_option("--n", enum_n, "ground size")->capture_default_str();

  CLI::App* const_cmd =
      app.add_subcommand("check-constants", "recompute rates, coefficients, margins");
  const_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cb::Config cfg =
        opt.config_path.empty() ? cb::default_config() : cb::load_config(opt.config_path);
    if (seed_opt->count() == 0) opt.seed = cfg.seed;
    if (build_n == 0) build_n = cfg.build.n;

    if (*cbal_cmd) return cmd_cbal(opt, cfg, cbal_file);
    if (*build_cmd) return cmd_build(opt, cfg, build_n, trace_trials);
    if (*mart_cmd) return cmd_martingale(opt, cfg, suite, negative_control);
    if (*mabp_cmd) return cmd_mabp(opt, cfg, mabp_n, mabp_file, block_size, dump_abp);
    if (*reduce_cmd) return cmd_reduce(opt, cfg, reduce_file, reduce_k, reduce_c);
    if (*enum_cmd) return cmd_enumerate(opt, cfg, enum_n);
    if (*const_cmd) return cmd_check_constants(opt, cfg);
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const cb::capacity_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

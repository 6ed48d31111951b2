// config.hpp -- named constant profiles, audit tolerances, and seeds.
//
// A Config starts from the embedded defaults; a JSON file selectively
// overrides fields. Unknown keys and type mismatches are rejected with
// input_error so typos cannot silently fall back to defaults.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainbal/constants.hpp"
#include "chainbal/fp.hpp"

namespace chainbal {

using Json = nlohmann::json;

// Master seed of the reported experiments; every trial derives its own
// stream from (seed, trial index), so runs are reproducible byte for byte.
constexpr std::uint64_t kDefaultSeed = 271828;

struct MartingaleConfig {
  std::int64_t pmf_t_max = 2001;               // odd-time truncation for pmf/pgf
  std::vector<double> pgf_points{0.25, 0.5, 0.9};
  double pgf_tolerance = 1e-6;                 // series vs closed form per point
  std::int64_t mgf_k_max = 10'000;             // partial-sum horizon at gamma
  double mgf_tolerance = 0.02;                 // distance below the sqrt(3) limit
  std::int64_t excursion_samples = 1'000'000;
  std::int64_t excursion_t_max = 40;
  double excursion_slack = 1.1;                // empirical survival vs 1.5 * rho^t
  std::int64_t descent_samples = 100'000;
  int descent_h0 = 10;                         // starting height of each descent
  double descent_slack = 1.5;                  // exceedance vs alpha^h0 / sqrt(3)
  std::int64_t walk_m = 16'384;                // segment size for steered-path suites
  std::int64_t walk_trials = 200;              // deviation and supermartingale suites
};

struct BuildConfig {
  int n = 16'384;
  std::int64_t trials = 2000;
  double success_threshold = 0.9;  // exit 0 iff the success fraction reaches it
};

struct MabpConfig {
  std::uint64_t modulus = kDefaultModulus;  // 2^61 - 1
  int retries = 3;  // fresh random weights after an unlucky rank deficit
};

struct Config {
  std::map<std::string, ConstantsProfile> profiles;
  MartingaleConfig martingale;
  BuildConfig build;
  MabpConfig mabp;
  std::uint64_t seed = kDefaultSeed;
};

// Profiles "paper" (4, 28, 8, 700) and "toy" (1, 1, 1, 2).
Config default_config();

// Defaults overridden by the (partial) JSON object; profiles given in the
// file are added to the named set or replace same-named defaults.
Config config_from_json(const Json& j);
Config load_config(const std::string& path);

Json config_to_json(const Config& config);

const ConstantsProfile& profile_or_throw(const Config& config, const std::string& name);

}  // namespace chainbal

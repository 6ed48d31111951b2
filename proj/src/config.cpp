// config.cpp -- config defaults, JSON overrides, profile lookup.
#include "chainbal/config.hpp"

#include <fstream>
#include <sstream>

#include "chainbal/errors.hpp"

namespace chainbal {
namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> known,
                    const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw input_error(std::string("unknown key \"") + it.key() + "\" in " + where);
  }
}

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw input_error(std::string(key) + " must be a number");
    out = v.get<double>();
  } else {
    if (!v.is_number_integer()) throw input_error(std::string(key) + " must be an integer");
    out = v.get<T>();
  }
}

// Moduli exceed 2^53, so they travel as decimal strings (integers accepted).
void read_u64(const Json& j, const char* key, std::uint64_t& out) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if (v.is_number_unsigned()) {
    out = v.get<std::uint64_t>();
    return;
  }
  if (v.is_string()) {
    const std::string& s = v.get<std::string>();
    try {
      std::size_t used = 0;
      out = std::stoull(s, &used);
      if (used == s.size() && !s.empty()) return;
    } catch (const std::exception&) {
    }
  }
  throw input_error(std::string(key) + " must be an unsigned integer or decimal string");
}

ConstantsProfile profile_from_json(const Json& j, const std::string& name) {
  if (!j.is_object()) throw input_error("profile \"" + name + "\" must be an object");
  reject_unknown(j, {"height_coeff", "gap_coeff", "descent_coeff", "base_threshold"},
                 ("profile \"" + name + "\"").c_str());
  ConstantsProfile p;
  read_field(j, "height_coeff", p.height_coeff);
  read_field(j, "gap_coeff", p.gap_coeff);
  read_field(j, "descent_coeff", p.descent_coeff);
  read_field(j, "base_threshold", p.base_threshold);
  p.validate();
  return p;
}

Json profile_to_json(const ConstantsProfile& p) {
  return Json{{"height_coeff", p.height_coeff},
              {"gap_coeff", p.gap_coeff},
              {"descent_coeff", p.descent_coeff},
              {"base_threshold", p.base_threshold}};
}

}  // namespace

Config default_config() {
  Config c;
  c.profiles["paper"] = ConstantsProfile{4, 28, 8, 700};
  c.profiles["toy"] = ConstantsProfile{1, 1, 1, 2};
  return c;
}

Config config_from_json(const Json& j) {
  if (!j.is_object()) throw input_error("config must be a JSON object");
  reject_unknown(j, {"profiles", "martingale", "build", "mabp", "seed"}, "config");
  Config c = default_config();
  if (j.contains("profiles")) {
    const Json& ps = j.at("profiles");
    if (!ps.is_object()) throw input_error("\"profiles\" must be an object");
    for (auto it = ps.begin(); it != ps.end(); ++it)
      c.profiles[it.key()] = profile_from_json(it.value(), it.key());
  }
  if (j.contains("martingale")) {
    const Json& m = j.at("martingale");
    if (!m.is_object()) throw input_error("\"martingale\" must be an object");
    reject_unknown(m,
                   {"pmf_t_max", "pgf_points", "pgf_tolerance", "mgf_k_max", "mgf_tolerance",
                    "excursion_samples", "excursion_t_max", "excursion_slack",
                    "descent_samples", "descent_h0", "descent_slack", "walk_m",
                    "walk_trials"},
                   "martingale config");
    read_field(m, "pmf_t_max", c.martingale.pmf_t_max);
    if (m.contains("pgf_points")) {
      const Json& pts = m.at("pgf_points");
      if (!pts.is_array() || pts.empty()) throw input_error("pgf_points must be a nonempty array");
      c.martingale.pgf_points.clear();
      for (const Json& v : pts) {
        if (!v.is_number()) throw input_error("pgf_points entries must be numbers");
        c.martingale.pgf_points.push_back(v.get<double>());
      }
    }
    read_field(m, "pgf_tolerance", c.martingale.pgf_tolerance);
    read_field(m, "mgf_k_max", c.martingale.mgf_k_max);
    read_field(m, "mgf_tolerance", c.martingale.mgf_tolerance);
    read_field(m, "excursion_samples", c.martingale.excursion_samples);
    read_field(m, "excursion_t_max", c.martingale.excursion_t_max);
    read_field(m, "excursion_slack", c.martingale.excursion_slack);
    read_field(m, "descent_samples", c.martingale.descent_samples);
    read_field(m, "descent_h0", c.martingale.descent_h0);
    read_field(m, "descent_slack", c.martingale.descent_slack);
    read_field(m, "walk_m", c.martingale.walk_m);
    read_field(m, "walk_trials", c.martingale.walk_trials);
  }
  if (j.contains("build")) {
    const Json& b = j.at("build");
    if (!b.is_object()) throw input_error("\"build\" must be an object");
    reject_unknown(b, {"n", "trials", "success_threshold"}, "build config");
    read_field(b, "n", c.build.n);
    read_field(b, "trials", c.build.trials);
    read_field(b, "success_threshold", c.build.success_threshold);
  }
  if (j.contains("mabp")) {
    const Json& m = j.at("mabp");
    if (!m.is_object()) throw input_error("\"mabp\" must be an object");
    reject_unknown(m, {"modulus", "retries"}, "mabp config");
    read_u64(m, "modulus", c.mabp.modulus);
    read_field(m, "retries", c.mabp.retries);
    if (c.mabp.retries < 1) throw input_error("retries must be >= 1");
  }
  read_u64(j, "seed", c.seed);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json j = Json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw input_error("malformed JSON in " + path);
  return config_from_json(j);
}

Json config_to_json(const Config& config) {
  Json ps = Json::object();
  for (const auto& [name, p] : config.profiles) ps[name] = profile_to_json(p);
  return Json{
      {"profiles", ps},
      {"martingale",
       Json{{"pmf_t_max", config.martingale.pmf_t_max},
            {"pgf_points", config.martingale.pgf_points},
            {"pgf_tolerance", config.martingale.pgf_tolerance},
            {"mgf_k_max", config.martingale.mgf_k_max},
            {"mgf_tolerance", config.martingale.mgf_tolerance},
            {"excursion_samples", config.martingale.excursion_samples},
            {"excursion_t_max", config.martingale.excursion_t_max},
            {"excursion_slack", config.martingale.excursion_slack},
            {"descent_samples", config.martingale.descent_samples},
            {"descent_h0", config.martingale.descent_h0},
            {"descent_slack", config.martingale.descent_slack},
            {"walk_m", config.martingale.walk_m},
            {"walk_trials", config.martingale.walk_trials}}},
      {"build",
       Json{{"n", config.build.n},
            {"trials", config.build.trials},
            {"success_threshold", config.build.success_threshold}}},
      {"mabp", Json{{"modulus", std::to_string(config.mabp.modulus)},
                    {"retries", config.mabp.retries}}},
      {"seed", config.seed}};
}

const ConstantsProfile& profile_or_throw(const Config& config, const std::string& name) {
  auto it = config.profiles.find(name);
  if (it == config.profiles.end()) throw input_error("unknown profile \"" + name + "\"");
  return it->second;
}

}  // namespace chainbal

// io.cpp -- serialization of systems, traces, reports.
#include "chainbal/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chainbal/errors.hpp"

namespace chainbal {
namespace {

// Round-trippable double text, stable across runs.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> mask_to_elements(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (m & (Mask{1} << i)) out.push_back(i + 1);
  return out;
}

long long require_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw input_error(std::string(what) + " must be an integer");
  return j.get<long long>();
}

}  // namespace

Json system_to_json(const SetSystem& X) {
  Json sets = Json::array();
  for (Mask m : X.sets()) sets.push_back(mask_to_elements(m));
  return Json{{"n", X.n()}, {"sets", sets}};
}

SetSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("sets"))
    throw input_error("set system must be an object with \"n\" and \"sets\"");
  long long n = require_int(j.at("n"), "\"n\"");
  if (n < 1 || n > 32) throw input_error("ground size must lie in [1, 32]");
  if (!j.at("sets").is_array()) throw input_error("\"sets\" must be an array");
  std::vector<Mask> masks;
  for (const Json& set : j.at("sets")) {
    if (!set.is_array()) throw input_error("each set must be an array of elements");
    Mask m = 0;
    long long prev = 0;
    for (const Json& e : set) {
      long long v = require_int(e, "set element");
      if (v < 1 || v > n) throw input_error("set element out of range");
      if (v <= prev) throw input_error("set elements must be ascending");
      prev = v;
      m |= Mask{1} << (v - 1);
    }
    masks.push_back(m);
  }
  return SetSystem(static_cast<int>(n), std::move(masks));
}

Json chain_to_json(const MaximalChain& chain) {
  Json order = Json::array();
  for (int e : chain.order) order.push_back(e + 1);
  return order;
}

MaximalChain chain_from_json(const Json& j) {
  if (!j.is_array()) throw input_error("chain must be an array of elements");
  MaximalChain chain;
  for (const Json& e : j) {
    long long v = require_int(e, "chain element");
    if (v < 1 || v > 32) throw input_error("chain element out of range");
    chain.order.push_back(static_cast<int>(v - 1));
  }
  return chain;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw input_error("cannot read " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw input_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw input_error("cannot write " + path);
}

SetSystem load_system(const std::string& path) {
  Json j = Json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw input_error("malformed JSON in " + path);
  return system_from_json(j);
}

void save_system(const std::string& path, const SetSystem& X) {
  write_text_file(path, system_to_json(X).dump(2) + "\n");
}

std::string trace_to_csv(const SteeredTrace& trace) {
  std::string out = "t,block,fvalue,H,D,coin\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const SteeredStep& s = trace.steps[i];
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(int(s.block));
    out += ',';
    out += std::to_string(int(s.fvalue));
    out += ',';
    out += std::to_string(s.imbalance_after);
    out += ',';
    out += std::to_string(s.deviation_after);
    out += ',';
    out += s.coin_used ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string pmf_to_csv(std::span<const PmfEntry> pmf) {
  std::string out = "t,numerator,denominator,probability\n";
  for (const PmfEntry& e : pmf) {
    out += std::to_string(e.t);
    out += ',';
    out += e.num.decimal();
    out += ',';
    out += e.den.decimal();
    out += ',';
    out += fmt_double(e.value());
    out += '\n';
  }
  return out;
}

Json audit_to_json(const AuditReport& report) {
  return Json{{"samples", report.samples},
              {"violations", report.violations},
              {"fraction", report.fraction()},
              {"worst_margin", report.worst_margin}};
}

std::string builder_trace_to_jsonl(const BuilderTrace& trace,
                                   const BalancedColoring& f, std::int64_t trial) {
  const std::vector<int>& order = trace.chain.order;
  struct Tag {
    int scale = -1;
    const char* phase = "";
  };
  std::vector<Tag> tags(order.size());
  std::int64_t covered = 0;
  auto mark = [&](std::int64_t from, std::int64_t to, int scale, const char* phase) {
    for (std::int64_t l = from + 1; l <= to; ++l)
      tags[static_cast<std::size_t>(l - 1)] = {scale, phase};
  };
  for (std::size_t j = 0; j < trace.scales.size(); ++j) {
    const ScaleRecord& rec = trace.scales[j];
    if (rec.anchor_levels.empty()) break;  // failed scale: no blocks landed
    mark(covered, rec.anchor_levels.front(), static_cast<int>(j), "transition");
    for (std::size_t i = 1; i < rec.anchor_levels.size(); ++i)
      mark(rec.anchor_levels[i - 1], rec.anchor_levels[i], static_cast<int>(j), "gap");
    covered = rec.anchor_levels.back();
    if (rec.base_case) {
      mark(covered, static_cast<std::int64_t>(order.size()), static_cast<int>(j), "final");
      covered = static_cast<std::int64_t>(order.size());
    }
  }
  if (covered != static_cast<std::int64_t>(order.size()))
    throw state_error("trace blocks do not cover the chain");

  std::string out;
  int h = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    h += f.at(order[i]);
    Json line{{"level", i + 1},
              {"element", order[i] + 1},
              {"imbalance", h},
              {"scale", tags[i].scale},
              {"phase", tags[i].phase}};
    if (trial >= 0) line["trial"] = trial;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string outcomes_csv_header() {
  return "trial,success,verified,reason,scales,max_height,max_gap\n";
}

std::string outcome_to_csv_row(const BuildOutcome& o) {
  std::string out = std::to_string(o.trial);
  out += ',';
  out += o.success ? '1' : '0';
  out += ',';
  out += o.verified ? '1' : '0';
  out += ',';
  out += to_string(o.reason);
  out += ',';
  out += std::to_string(o.scales);
  out += ',';
  out += std::to_string(o.max_height);
  out += ',';
  out += std::to_string(o.max_gap);
  out += '\n';
  return out;
}

Json abp_to_json(const Abp& abp) {
  Json layers = Json::array();
  int size = -1;
  for (Mask v : abp.vertices) {
    if (popcount(v) != size) {
      size = popcount(v);
      layers.push_back(Json::array());
    }
    layers.back().push_back(mask_to_elements(v));
  }
  Json edges = Json::array();
  for (const AbpEdge& e : abp.edges) {
    edges.push_back(Json{{"from", mask_to_elements(e.from)},
                         {"to", mask_to_elements(e.to)},
                         {"mid", e.mid + 1},
                         {"tail", e.tail + 1},
                         {"w1", std::to_string(e.w1)},
                         {"w2", std::to_string(e.w2)}});
  }
  return Json{{"n", abp.n},
              {"modulus", std::to_string(abp.modulus)},
              {"layers", layers},
              {"edges", edges}};
}

Json rank_report_to_json(const RankReport& report) {
  Json parts = Json::array();
  for (std::size_t i = 0; i < report.partitions.size(); ++i) {
    const PartitionRank& p = report.partitions[i];
    parts.push_back(Json{{"partition", i},
                         {"positive_side", mask_to_elements(p.positive_side)},
                         {"rank", p.rank},
                         {"expected", p.expected},
                         {"pass", p.rank == p.expected}});
  }
  return Json{{"pass", report.pass},
              {"precondition_ok", report.precondition_ok},
              {"chain_balance", report.chain_balance_value},
              {"expected_rank", report.expected_rank},
              {"partitions", parts}};
}

Json gadget_report_to_json(const GadgetReport& report) {
  return Json{{"pass", report.pass},
              {"chain_found", report.chain_found},
              {"projection_matches", report.projection_matches},
              {"rank", report.rank},
              {"expected", report.expected}};
}

}  // namespace chainbal

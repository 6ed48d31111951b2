// io.hpp -- JSON/CSV/JSONL serialization for every artifact the CLI emits.
//
// JSON goes through the vendored nlohmann header. Element lists are 1-based
// and ascending on disk, 0-based in memory. Readers throw input_error on
// malformed or schema-violating data so the CLI can map them to exit code 2.
#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <json.hpp>

#include "chainbal/birth_death.hpp"
#include "chainbal/builder.hpp"
#include "chainbal/core.hpp"
#include "chainbal/mabp.hpp"
#include "chainbal/steered_path.hpp"

namespace chainbal {

using Json = nlohmann::json;

// {"n": int, "sets": [[ascending 1-based elements], ...]}
Json system_to_json(const SetSystem& X);
SetSystem system_from_json(const Json& j);

// Chains travel as their element-order arrays (1-based).
Json chain_to_json(const MaximalChain& chain);
MaximalChain chain_from_json(const Json& j);

// Whole-file helpers; read_text/parse failures -> input_error.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
SetSystem load_system(const std::string& path);
void save_system(const std::string& path, const SetSystem& X);

// t,block,fvalue,H,D,coin -- one row per step, t from 1.
std::string trace_to_csv(const SteeredTrace& trace);

// t,numerator,denominator,probability -- exact values as decimal strings.
std::string pmf_to_csv(std::span<const PmfEntry> pmf);

Json audit_to_json(const AuditReport& report);

// One JSON object per chain level: level, element (1-based), imbalance,
// scale, phase (transition|gap|final), plus the trial index when one is
// given (>= 0). Derived from the anchor levels the same way the verifier
// slices the chain; truncated traces cover exactly the completed blocks.
std::string builder_trace_to_jsonl(const BuilderTrace& trace,
                                   const BalancedColoring& f,
                                   std::int64_t trial = -1);

// trial,success,verified,reason,scales,max_height,max_gap
std::string outcomes_csv_header();
std::string outcome_to_csv_row(const BuildOutcome& o);

// {"n", "modulus", "layers": [[vertex sets]], "edges": [{from, to, mid,
//  tail, w1, w2}]}; weights as decimal strings so the JSON survives tools
// that parse numbers as doubles.
Json abp_to_json(const Abp& abp);

Json rank_report_to_json(const RankReport& report);
Json gadget_report_to_json(const GadgetReport& report);

}  // namespace chainbal

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rotor/alpha_builder.hpp"
#include "rotor/birkhoff.hpp"
#include "rotor/cf_core.hpp"
#include "rotor/observable.hpp"

namespace rotor {

// ---------------------------------------------------------------- specs
//
// Observable: "h" or {"b": [...], "beta": [...]}.
// Alpha: {"kind": "constant", "a": 1} | {"kind": "digits", "digits": [...], "exact": false}
//      | {"kind": "rational", "value": "p/q"} | {"kind": "gauss_random", "len": L, "seed": s}
//      | {"kind": "build_in_A", "stages": 3, "M": 1, "search_budget": 1000, "filler": "ones", "seed": 0,
//         "eps0": <optional>}
// x: "p/q" | {"kind": "rational", "value": "p/q"} | {"kind": "random", "seed": s, "index": i}
//
// Errors are ConfigError with the JSON path of the offending field.

SawtoothCombo observable_from_spec(const nlohmann::json& j, const std::string& path = "observable");

struct AlphaBuild {
  CfDigits digits;
  nlohmann::json plan;  // null unless built by build_in_A
};
AlphaBuild alpha_from_spec(const nlohmann::json& j, const SawtoothCombo& f, const std::string& path = "alpha");
Rational x_from_spec(const nlohmann::json& j, const std::string& path = "x");

// Short command-line forms: "golden", "constant:A", "digits:1,2,3", "rational:p/q",
// "gauss:LEN[:SEED]", "planted[:STAGES[:M]]"; observables "h" or "b=1,-1/2;beta=0,2/7";
// x "p/q" or "random:SEED:INDEX".
nlohmann::json alpha_spec_from_cli(const std::string& s);
nlohmann::json observable_spec_from_cli(const std::string& s);
nlohmann::json x_spec_from_cli(const std::string& s);

// ---------------------------------------------------------------- digests, threads

std::string sha256_hex(const std::string& bytes);
// Canonical form: validated config dumped with sorted keys.
std::string config_digest(const nlohmann::json& config);

// --threads wins, then ROTORLAB_THREADS, else the OpenMP default. Returns the count in use.
int configure_threads(std::optional<int> cli_threads);

// ---------------------------------------------------------------- run

struct ExperimentConfig {
  nlohmann::json observable = "h";
  nlohmann::json alpha;
  nlohmann::json x;
  std::int64_t N = 1000;
  BigInt guard = default_guard();
  std::string grid;                    // empty: geometric grid up to N
  std::vector<std::string> tasks{"ensemble", "scan"};
  std::string acceptance;              // "", "exact", "statistical", "measure" or "all"
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "csv";          // csv | json

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RunResult {
  std::vector<std::string> files;  // relative to out_dir
  nlohmann::json summary;
  bool ok = true;                  // false when any task failed
};

// Writes every output with the config digest in a header row, then
// manifest.json listing each file with its SHA-256.
RunResult run(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- verify

enum class Suite { Exact, Statistical, Measure, All };
Suite parse_suite(const std::string& s);

struct CriterionResult {
  int id = 0;  // 1..15 for acceptance criteria, 0 for measure-battery rows
  std::string name;
  std::string suite;  // "exact", "statistical" or "measure"
  bool passed = false;
  std::string detail;
  std::uint64_t seed = 0;
  double seconds = 0;
};

struct FaultInjection {
  bool tamper_cylinder = false;  // perturbs the cylinder measure seen by criterion 3
};

using ResultSink = std::function<void(const CriterionResult&)>;

std::vector<CriterionResult> run_criteria(Suite suite, const FaultInjection& fault = {}, const ResultSink& sink = {});
// Measure battery: JSON rows {op, params, mean, stderr, n, seed}.
std::vector<CriterionResult> run_measure_battery(std::vector<nlohmann::json>& rows, const ResultSink& sink = {});

std::string format_line(const CriterionResult& r);

// Prints one line per result, writes verify_report.csv (and measure_rows.json for
// the measure suite) under out_dir when it is non-empty. Exit status 1 when any
// exact criterion fails, 0 otherwise.
int verify(Suite suite, std::ostream& out, const std::string& out_dir, const FaultInjection& fault = {});

}  // namespace rotor

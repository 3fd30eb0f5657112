#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "supsat/oracle.hpp"
#include "supsat/saturation.hpp"
#include "supsat/verdict.hpp"

namespace supsat {

struct FlagCombo {
  bool ftty = true;
  bool fntty = true;
  bool hvo = true;

  // "none", "-noftty", "-noftty -nohvo", ...
  std::string label() const;
  friend bool operator==(const FlagCombo&, const FlagCombo&) = default;
};

// The eight columns of the benchmark grid, in the published order.
std::vector<FlagCombo> flag_grid();

struct RunOptions {
  FlagCombo flags;
  std::chrono::milliseconds timeout{600'000};
  bool oracle = false;
  std::size_t oracle_depth = 200;
  std::uint32_t oracle_threshold = 5;
};

struct RunReport {
  Outcome outcome = Outcome::Unknown;
  bool safe = false;
  bool homogeneous = false;
  unsigned order = 0;
  std::vector<std::string> letters;
  SaturationStats stats;
  FlagCombo flags;
  std::vector<std::string> witness_path;
  std::vector<std::string> witness_cycle;
  bool has_witness = false;
  std::optional<OracleEvidence> oracle;
};

// Saturates, decides and (optionally) runs the expansion oracle. The saturation is
// handed back through `sat_out` when given. Throws ResourceExceeded on caps.
RunReport run_check(const Scheme& g, const RunOptions& opts, std::optional<Saturation>* sat_out = nullptr);

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);
// First line is the verdict token.
std::string to_text(const RunReport& r);
// Profile of the expansion oracle as CSV "depth,f"; f is empty when no finite branch.
std::string profile_csv(const OracleEvidence& ev);
// Derivation graph in DOT; productive edges are labeled with their letters.
std::string to_dot(const Saturation& sat);

struct BenchCell {
  std::optional<Outcome> outcome;
  double seconds = 0;
  bool timeout = false;
  bool out_of_memory = false;
  std::string error;

  std::string text() const;
};

struct BenchRow {
  std::string name;
  unsigned order = 0;
  std::vector<BenchCell> cells;  // one per flag_grid() entry
  std::optional<Outcome> expected;

  // All completed cells agree (and match the expectation, when given).
  bool consistent() const;
};

BenchCell run_cell(const Scheme& g, const FlagCombo& flags, std::chrono::milliseconds timeout);
// Reads the sidecar FILE.expect (a verdict token) if present.
std::optional<Outcome> read_expectation(const std::string& scheme_path);
std::string format_bench(const std::vector<BenchRow>& rows);

}  // namespace supsat

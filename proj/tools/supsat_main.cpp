#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "supsat/error.hpp"
#include "supsat/flow.hpp"
#include "supsat/parser.hpp"
#include "supsat/report.hpp"
#include "supsat/structure.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 3;
constexpr int kExitResource = 4;
constexpr int kExitMismatch = 5;

std::vector<std::string> split_letters(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

supsat::Scheme load(const std::string& path, const std::string& letters) {
  supsat::Scheme g = supsat::load_scheme_file(path);
  if (!letters.empty()) g = g.with_important(split_letters(letters));
  if (g.letter_count() == 0) throw supsat::InputError("no important letters declared");
  return g;
}

struct CheckArgs {
  std::string file;
  std::string letters;
  bool noftty = false, nofntty = false, nohvo = false;
  double timeout = 600;
  bool oracle = false;
  std::size_t oracle_depth = 200;
  std::uint32_t oracle_threshold = 5;
  bool dump_derivations = false, dump_graph = false, dump_flows = false, json = false;
  std::string expect;
};

int cmd_check(const CheckArgs& a) {
  std::optional<supsat::Outcome> expected;
  if (!a.expect.empty()) {
    expected = supsat::parse_outcome(a.expect);
    if (!expected) {
      std::cerr << "error: --expect takes unbounded, bounded or unknown\n";
      return kExitInput;
    }
  }
  try {
    supsat::Scheme g = load(a.file, a.letters);
    supsat::RunOptions opts;
    opts.flags = {!a.noftty, !a.nofntty, !a.nohvo};
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout * 1000));
    opts.oracle = a.oracle;
    opts.oracle_depth = a.oracle_depth;
    opts.oracle_threshold = a.oracle_threshold;
    std::optional<supsat::Saturation> sat;
    supsat::RunReport r = supsat::run_check(g, opts, &sat);
    if (a.json) {
      std::cout << supsat::to_json(r).dump(2) << "\n";
    } else {
      std::cout << supsat::to_text(r);
      if (a.dump_flows) std::cout << "-- flows\n" << supsat::compute_flows(g).dump(g);
      if (a.dump_derivations) std::cout << "-- derivations\n" << sat->dump_derivations();
      if (a.dump_graph) std::cout << "-- graph\n" << supsat::to_dot(*sat);
      if (r.oracle) std::cout << "-- oracle profile\n" << supsat::profile_csv(*r.oracle);
    }
    if (expected && *expected != r.outcome) {
      std::cerr << "expected " << supsat::to_string(*expected) << ", got " << supsat::to_string(r.outcome) << "\n";
      return kExitMismatch;
    }
    return kExitOk;
  } catch (const supsat::InputError& e) {
    std::cerr << a.file << ":" << e.what() << "\n";
    return kExitInput;
  } catch (const supsat::ResourceExceeded& e) {
    std::cerr << (e.kind() == supsat::ResourceExceeded::Kind::Timeout ? "timeout: " : "resource cap: ") << e.what()
              << "\n";
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource cap: out of memory\n";
    return kExitResource;
  }
}

int cmd_bench(const std::string& dir, const std::string& letters, double timeout, int jobs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    std::cerr << "error: " << dir << " is not a directory\n";
    return kExitInput;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".hrs") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  const auto combos = supsat::flag_grid();
  std::vector<supsat::BenchRow> rows(files.size());
  std::vector<std::optional<supsat::Scheme>> schemes(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    rows[i].name = files[i].stem().string();
    rows[i].expected = supsat::read_expectation(files[i].string());
    rows[i].cells.resize(combos.size());
    try {
      schemes[i] = load(files[i].string(), letters);
      rows[i].order = schemes[i]->order();
    } catch (const std::exception& e) {
      for (auto& c : rows[i].cells) c.error = e.what();
      std::cerr << files[i].string() << ":" << e.what() << "\n";
    }
  }

  auto limit = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
  long long total = static_cast<long long>(files.size() * combos.size());
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#pragma omp parallel for schedule(dynamic)
#else
  (void)jobs;
#endif
  for (long long k = 0; k < total; ++k) {
    std::size_t i = static_cast<std::size_t>(k) / combos.size(), j = static_cast<std::size_t>(k) % combos.size();
    if (schemes[i]) rows[i].cells[j] = supsat::run_cell(*schemes[i], combos[j], limit);
  }

  std::cout << supsat::format_bench(rows);
  return kExitOk;
}

// CLI11 only knows single-character short flags; the optimization switches keep
// their historical single-dash spelling.
std::vector<std::string> normalize_args(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) {
    std::string s = argv[i];
    if (s == "-noftty" || s == "-nofntty" || s == "-nohvo") s = "-" + s;
    out.push_back(s);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous unboundedness checker for higher-order recursion schemes", "supsat"};
  app.require_subcommand(1);

  CheckArgs c;
  auto* check = app.add_subcommand("check", "Decide the simultaneous unboundedness problem for one scheme");
  check->add_option("file", c.file, "Scheme file")->required();
  check->add_option("--letters", c.letters, "Important letters, comma separated (overrides %BEGINI)");
  check->add_flag("--noftty", c.noftty, "Disable retyping restricted to new candidate types");
  check->add_flag("--nofntty", c.nofntty, "Disable retyping restricted to new nonterminal bindings");
  check->add_flag("--nohvo", c.nohvo, "Disable demand-driven parameter typing");
  check->add_option("--timeout", c.timeout, "Wall-clock limit in seconds")->capture_default_str();
  check->add_flag("--oracle", c.oracle, "Also run the expansion oracle");
  check->add_option("--oracle-depth", c.oracle_depth, "Depth budget of the expansion oracle")->capture_default_str();
  check->add_option("--oracle-threshold", c.oracle_threshold, "Per-letter count the oracle looks for")
      ->capture_default_str();
  check->add_flag("--dump-derivations", c.dump_derivations, "Print every derivation record");
  check->add_flag("--dump-graph", c.dump_graph, "Print the derivation graph in DOT");
  check->add_flag("--dump-flows", c.dump_flows, "Print the flow table");
  check->add_flag("--json", c.json, "Print a single JSON object");
  check->add_option("--expect", c.expect, "Exit 5 unless the verdict is this (unbounded|bounded|unknown)");

  std::string bench_dir, bench_letters;
  double bench_timeout = 600;
  int jobs = 0;
  auto* bench = app.add_subcommand("bench", "Run every .hrs file of a directory under all flag combinations");
  bench->add_option("dir", bench_dir, "Directory of scheme files")->required();
  bench->add_option("--letters", bench_letters, "Important letters for every scheme");
  bench->add_option("--timeout", bench_timeout, "Per-cell limit in seconds")->capture_default_str();
  bench->add_option("--jobs", jobs, "Worker threads (0: runtime default)");

  try {
    std::vector<std::string> args = normalize_args(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (check->parsed()) return cmd_check(c);
  return cmd_bench(bench_dir, bench_letters, bench_timeout, jobs);
}

#include "supsat/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "supsat/error.hpp"
#include "supsat/flow.hpp"
#include "supsat/structure.hpp"

namespace supsat {

std::string FlagCombo::label() const {
  std::string out;
  auto add = [&](const char* s) { out += out.empty() ? s : std::string(" ") + s; };
  if (!ftty) add("-noftty");
  if (!fntty) add("-nofntty");
  if (!hvo) add("-nohvo");
  return out.empty() ? "none" : out;
}

std::vector<FlagCombo> flag_grid() {
  return {
      {true, true, true},   {false, true, true},  {true, false, true},  {true, true, false},
      {false, false, true}, {false, true, false}, {true, false, false}, {false, false, false},
  };
}

RunReport run_check(const Scheme& g, const RunOptions& opts, std::optional<Saturation>* sat_out) {
  RunReport r;
  r.safe = scheme_is_safe(g);
  r.homogeneous = scheme_is_homogeneous(g);
  r.order = g.order();
  r.letters = g.letter_names();
  r.flags = opts.flags;

  SaturationOptions so;
  so.ftty = opts.flags.ftty;
  so.fntty = opts.flags.fntty;
  so.hvo = opts.flags.hvo;
  so.timeout = opts.timeout;
  FlowTable flows = compute_flows(g);
  Saturation sat = saturate(g, flows, so);
  Verdict v = decide(graph_view(sat), r.safe);
  r.outcome = v.outcome;
  r.stats = sat.stats();
  if (v.witness) {
    r.has_witness = true;
    for (std::uint32_t n : v.witness->path) r.witness_path.push_back(sat.render_node(n));
    for (std::uint32_t n : v.witness->cycle) r.witness_cycle.push_back(sat.render_node(n));
  }
  if (opts.oracle) r.oracle = oracle_unbounded_evidence(g, opts.oracle_depth, opts.oracle_threshold);
  if (sat_out) sat_out->emplace(std::move(sat));
  return r;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["verdict"] = to_string(r.outcome);
  j["safe"] = r.safe;
  j["homogeneous"] = r.homogeneous;
  j["order"] = r.order;
  j["letters"] = r.letters;
  j["flags"] = {{"ftty", r.flags.ftty}, {"fntty", r.flags.fntty}, {"hvo", r.flags.hvo}};
  j["stats"] = {{"bindings", r.stats.bindings},
                {"edges", r.stats.edges},
                {"productive_edges", r.stats.productive_edges},
                {"iterations", r.stats.iterations},
                {"ms", r.stats.ms}};
  if (r.has_witness)
    j["witness"] = {{"path", r.witness_path}, {"cycle", r.witness_cycle}};
  else
    j["witness"] = nullptr;
  if (r.oracle)
    j["oracle"] = {{"confirmed", r.oracle->confirmed}, {"max_f", r.oracle->max_f}, {"depth", r.oracle->depth}};
  else
    j["oracle"] = nullptr;
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  r.outcome = parse_outcome(j.at("verdict").get<std::string>()).value();
  r.safe = j.at("safe").get<bool>();
  r.homogeneous = j.at("homogeneous").get<bool>();
  r.order = j.at("order").get<unsigned>();
  r.letters = j.at("letters").get<std::vector<std::string>>();
  const auto& f = j.at("flags");
  r.flags = FlagCombo{f.at("ftty").get<bool>(), f.at("fntty").get<bool>(), f.at("hvo").get<bool>()};
  const auto& s = j.at("stats");
  r.stats.bindings = s.at("bindings").get<std::size_t>();
  r.stats.edges = s.at("edges").get<std::size_t>();
  r.stats.productive_edges = s.at("productive_edges").get<std::size_t>();
  r.stats.iterations = s.at("iterations").get<std::size_t>();
  r.stats.ms = s.at("ms").get<double>();
  if (!j.at("witness").is_null()) {
    r.has_witness = true;
    r.witness_path = j["witness"].at("path").get<std::vector<std::string>>();
    r.witness_cycle = j["witness"].at("cycle").get<std::vector<std::string>>();
  }
  if (!j.at("oracle").is_null()) {
    OracleEvidence ev;
    ev.confirmed = j["oracle"].at("confirmed").get<bool>();
    ev.max_f = j["oracle"].at("max_f").get<std::uint32_t>();
    ev.depth = j["oracle"].at("depth").get<std::size_t>();
    r.oracle = ev;
  }
  return r;
}

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

}  // namespace

std::string to_text(const RunReport& r) {
  std::ostringstream out;
  out << to_string(r.outcome) << "\n";
  out << "safe: " << (r.safe ? "true" : "false") << "\n";
  out << "homogeneous: " << (r.homogeneous ? "true" : "false") << "\n";
  out << "order: " << r.order << "\n";
  out << "letters: " << join(r.letters, ",") << "\n";
  out << "flags: " << r.flags.label() << "\n";
  out << "stats: bindings=" << r.stats.bindings << " edges=" << r.stats.edges
      << " productive_edges=" << r.stats.productive_edges << " iterations=" << r.stats.iterations
      << " ms=" << fmt_ms(r.stats.ms) << "\n";
  if (r.has_witness) {
    out << "witness path: " << join(r.witness_path, " -> ") << "\n";
    out << "witness cycle: " << join(r.witness_cycle, " -> ") << " -> " << r.witness_cycle.front() << "\n";
  }
  if (r.oracle)
    out << "oracle: " << (r.oracle->confirmed ? "confirmed" : "inconclusive") << " max_f=" << r.oracle->max_f
        << " depth=" << r.oracle->depth << "\n";
  return out.str();
}

std::string profile_csv(const OracleEvidence& ev) {
  std::string out = "depth,f\n";
  for (std::size_t d = 0; d < ev.profile.size(); ++d)
    out += std::to_string(d + 1) + "," + (ev.profile[d] ? std::to_string(*ev.profile[d]) : "") + "\n";
  return out;
}

std::string to_dot(const Saturation& sat) {
  static const char* kColors[] = {"red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"};
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::vector<std::string> letters = sat.scheme().letter_names();
  std::ostringstream out;
  out << "digraph derivations {\n";
  for (std::uint32_t id = 0; id < sat.nodes().size(); ++id) {
    std::string label = sat.scheme().nonterminals()[sat.nodes()[id].nonterminal].name + ":" +
                        sat.render_binding(sat.nodes()[id].binding);
    out << "  n" << id << " [label=" << quote(label) << "];\n";
  }
  for (const GraphEdge& e : sat.edges()) {
    out << "  n" << e.from << " -> n" << e.to;
    if (!e.productive.empty()) {
      std::vector<std::string> names, colors;
      for (std::size_t a = 0; a < letters.size(); ++a)
        if (e.productive.contains(a)) {
          names.push_back(letters[a]);
          colors.push_back(kColors[a % 8]);
        }
      out << " [label=" << quote(join(names, ",")) << ", color=" << quote(join(colors, ":"))
          << ", style=bold]";
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string BenchCell::text() const {
  if (timeout) return "TO";
  if (out_of_memory) return "OOM";
  if (!outcome) return "ERR";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f %c", seconds,
                *outcome == Outcome::Unbounded ? 'U' : *outcome == Outcome::Bounded ? 'B' : '?');
  return buf;
}

bool BenchRow::consistent() const {
  std::optional<Outcome> seen = expected;
  for (const BenchCell& c : cells) {
    if (!c.outcome) continue;
    if (seen && *seen != *c.outcome) return false;
    seen = c.outcome;
  }
  return true;
}

BenchCell run_cell(const Scheme& g, const FlagCombo& flags, std::chrono::milliseconds timeout) {
  BenchCell cell;
  auto t0 = std::chrono::steady_clock::now();
  try {
    RunOptions opts;
    opts.flags = flags;
    opts.timeout = timeout;
    cell.outcome = run_check(g, opts).outcome;
  } catch (const ResourceExceeded& e) {
    (e.kind() == ResourceExceeded::Kind::Timeout ? cell.timeout : cell.out_of_memory) = true;
  } catch (const std::bad_alloc&) {
    cell.out_of_memory = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cell;
}

std::optional<Outcome> read_expectation(const std::string& scheme_path) {
  std::ifstream in(scheme_path + ".expect");
  if (!in) {
    std::filesystem::path p(scheme_path);
    in.open(p.replace_extension(".expect"));
    if (!in) return std::nullopt;
  }
  std::string token;
  in >> token;
  return parse_outcome(token);
}

std::string format_bench(const std::vector<BenchRow>& rows) {
  std::vector<std::string> header{"scheme", "ord"};
  for (const FlagCombo& c : flag_grid()) header.push_back(c.label());
  header.push_back("expect");
  header.push_back("consistent");
  std::vector<std::vector<std::string>> table{header};
  for (const BenchRow& r : rows) {
    std::vector<std::string> line{r.name, std::to_string(r.order)};
    for (const BenchCell& c : r.cells) line.push_back(c.text());
    line.push_back(r.expected ? to_string(*r.expected) : "-");
    line.push_back(r.consistent() ? "yes" : "NO");
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : table)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  std::string out;
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out += line[i];
      if (i + 1 < line.size()) out += std::string(width[i] - line[i].size() + 2, ' ');
    }
    out += "\n";
  }
  return out;
}

}  // namespace supsat

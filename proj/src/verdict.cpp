#include "supsat/verdict.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "supsat/structure.hpp"

namespace supsat {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Unbounded:
      return "UNBOUNDED";
    case Outcome::Bounded:
      return "BOUNDED";
    case Outcome::Unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<Outcome> parse_outcome(const std::string& s) {
  std::string u;
  for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "UNBOUNDED") return Outcome::Unbounded;
  if (u == "BOUNDED") return Outcome::Bounded;
  if (u == "UNKNOWN") return Outcome::Unknown;
  return std::nullopt;
}

GraphView graph_view(const Saturation& sat) {
  GraphView g;
  g.nodes = sat.nodes().size();
  g.edges = sat.edges();
  g.start = sat.start_binding();
  g.letters = sat.scheme().letter_count();
  return g;
}

namespace {

std::vector<std::vector<std::uint32_t>> successors(const GraphView& g) {
  std::vector<std::vector<std::uint32_t>> succ(g.nodes);
  for (const GraphEdge& e : g.edges) succ[e.from].push_back(e.to);
  for (auto& s : succ) std::sort(s.begin(), s.end());
  return succ;
}

std::vector<bool> reachable(const std::vector<std::vector<std::uint32_t>>& succ, std::uint32_t root) {
  std::vector<bool> seen(succ.size());
  std::vector<std::uint32_t> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    for (std::uint32_t m : succ[n])
      if (!seen[m]) {
        seen[m] = true;
        stack.push_back(m);
      }
  }
  return seen;
}

// Shortest path from `from` to `to` inside `allowed` (both ends included).
std::vector<std::uint32_t> shortest_path(const std::vector<std::vector<std::uint32_t>>& succ, std::uint32_t from,
                                         std::uint32_t to, const std::vector<bool>& allowed) {
  std::vector<std::int64_t> parent(succ.size(), -1);
  std::vector<bool> seen(succ.size());
  std::deque<std::uint32_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    std::uint32_t n = queue.front();
    queue.pop_front();
    if (n == to) break;
    for (std::uint32_t m : succ[n])
      if (allowed[m] && !seen[m]) {
        seen[m] = true;
        parent[m] = n;
        queue.push_back(m);
      }
  }
  if (!seen[to]) return {};
  std::vector<std::uint32_t> path{to};
  while (path.back() != from) path.push_back(static_cast<std::uint32_t>(parent[path.back()]));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<std::uint32_t> strongly_connected_components(const std::vector<std::vector<std::uint32_t>>& succ) {
  // Iterative Tarjan.
  const std::uint32_t kUnvisited = ~0u;
  std::size_t n = succ.size();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0, components = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < succ[v].size()) {
        std::uint32_t w = succ[v][i++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != v);
        ++components;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

std::optional<std::vector<std::uint32_t>> productive_component(const GraphView& g) {
  if (!g.start) return std::nullopt;
  auto succ = successors(g);
  auto comp = strongly_connected_components(succ);
  auto seen = reachable(succ, *g.start);
  std::map<std::uint32_t, ProdSet> covered;
  for (const GraphEdge& e : g.edges)
    if (seen[e.from] && comp[e.from] == comp[e.to]) covered[comp[e.from]] |= e.productive;
  ProdSet all = ProdSet::all(g.letters);
  // Prefer the component containing the smallest node id, for a canonical witness.
  std::optional<std::uint32_t> best;
  for (std::uint32_t n = 0; n < g.nodes && !best; ++n)
    if (seen[n] && all.subset_of(covered[comp[n]]) && g.letters > 0) best = comp[n];
  if (!best) return std::nullopt;
  std::vector<std::uint32_t> nodes;
  for (std::uint32_t n = 0; n < g.nodes; ++n)
    if (comp[n] == *best) nodes.push_back(n);
  return nodes;
}

bool productive_cycle_through_edge(const GraphView& g, std::size_t letter) {
  if (!g.start) return false;
  auto succ = successors(g);
  auto seen = reachable(succ, *g.start);
  for (const GraphEdge& e : g.edges) {
    if (!seen[e.from] || !e.productive.contains(letter)) continue;
    if (reachable(succ, e.to)[e.from]) return true;
  }
  return false;
}

std::optional<Witness> find_witness(const GraphView& g) {
  auto component = productive_component(g);
  if (!component) return std::nullopt;
  auto succ = successors(g);
  std::vector<bool> in_comp(g.nodes), everywhere(g.nodes, true);
  for (std::uint32_t n : *component) in_comp[n] = true;

  Witness w;
  // Path to the nearest node of the component.
  std::deque<std::uint32_t> queue{*g.start};
  std::vector<std::int64_t> parent(g.nodes, -1);
  std::vector<bool> seen(g.nodes);
  seen[*g.start] = true;
  std::uint32_t entry = *g.start;
  while (!queue.empty()) {
    std::uint32_t n = queue.front();
    queue.pop_front();
    if (in_comp[n]) {
      entry = n;
      break;
    }
    for (std::uint32_t m : succ[n])
      if (!seen[m]) {
        seen[m] = true;
        parent[m] = n;
        queue.push_back(m);
      }
  }
  w.path.push_back(entry);
  while (w.path.back() != *g.start) w.path.push_back(static_cast<std::uint32_t>(parent[w.path.back()]));
  std::reverse(w.path.begin(), w.path.end());

  // Walk: for each letter, go to a productive edge and take it; then return to the entry.
  std::vector<std::uint32_t> walk{entry};
  for (std::size_t a = 0; a < g.letters; ++a) {
    const GraphEdge* chosen = nullptr;
    for (const GraphEdge& e : g.edges)
      if (in_comp[e.from] && in_comp[e.to] && e.productive.contains(a)) {
        chosen = &e;
        break;
      }
    auto to_source = shortest_path(succ, walk.back(), chosen->from, in_comp);
    walk.insert(walk.end(), to_source.begin() + 1, to_source.end());
    w.productive_steps.push_back(walk.size() - 1);
    walk.push_back(chosen->to);
  }
  auto back = shortest_path(succ, walk.back(), entry, in_comp);
  walk.insert(walk.end(), back.begin() + 1, back.end());
  walk.pop_back();  // the entry closes the walk
  w.cycle = std::move(walk);
  return w;
}

Verdict decide(const GraphView& g, bool scheme_safe) {
  Verdict v;
  v.scheme_safe = scheme_safe;
  if (auto w = find_witness(g)) {
    v.outcome = Outcome::Unbounded;
    v.witness = std::move(w);
  } else {
    v.outcome = scheme_safe ? Outcome::Bounded : Outcome::Unknown;
  }
  return v;
}

Verdict decide(const Saturation& sat) { return decide(graph_view(sat), scheme_is_safe(sat.scheme())); }

namespace {

// Value of a record after replacing each assumption priced chi(B) by a derivation of
// value `value_of(y)`.
template <class F>
ValueVec substitute(const Saturation& sat, const RuleRecord& r, F value_of) {
  ValueVec v = r.value;
  std::size_t letters = sat.scheme().letter_count();
  for (auto [y, count] : r.assumptions) {
    ValueVec actual = value_of(y);
    ProdSet price = sat.nodes()[y].binding.set;
    for (std::size_t a = 0; a < letters; ++a) v[a] = v[a] - count * (price.contains(a) ? 1u : 0u) + count * actual[a];
  }
  return v;
}

bool uses(const RuleRecord& r, std::uint32_t y) {
  for (auto [id, c] : r.assumptions)
    if (id == y) return true;
  return false;
}

bool strictly_greater(const ValueVec& a, const ValueVec& b, std::size_t letters) {
  for (std::size_t i = 0; i < letters; ++i)
    if (a[i] <= b[i]) return false;
  return true;
}

}  // namespace

Replay replay_witness(const Saturation& sat, const Witness& w, int rounds) {
  Replay out;
  std::size_t letters = sat.scheme().letter_count();
  std::size_t n = sat.nodes().size();

  // Base values in creation order: the founding record only uses older nodes.
  std::vector<ValueVec> base(n);
  for (std::uint32_t id = 0; id < n; ++id) {
    const RuleRecord& f = sat.records(id).front();
    for (auto [y, c] : f.assumptions)
      if (y >= id) {
        out.error = "founding record of node " + std::to_string(id) + " uses a younger node";
        return out;
      }
    base[id] = substitute(sat, f, [&](std::uint32_t y) { return base[y]; });
  }

  // Record for each walk step.
  std::size_t len = w.cycle.size();
  std::vector<const RuleRecord*> step_record(len, nullptr);
  for (std::size_t i = 0; i < len; ++i) {
    std::uint32_t from = w.cycle[i], to = w.cycle[(i + 1) % len];
    std::optional<std::size_t> letter;
    for (std::size_t a = 0; a < w.productive_steps.size(); ++a)
      if (w.productive_steps[a] == i) letter = a;
    ProdSet price = sat.nodes()[to].binding.set;
    for (const RuleRecord& r : sat.records(from)) {
      if (!uses(r, to)) continue;
      if (letter && r.value[*letter] <= (price.contains(*letter) ? 1u : 0u)) continue;
      if (!step_record[i] || r.value.dominates(step_record[i]->value)) step_record[i] = &r;
    }
    if (!step_record[i]) {
      out.error = "no record for witness step " + std::to_string(i);
      return out;
    }
  }
  // Records for the path from the start to the entry.
  std::vector<const RuleRecord*> path_record;
  for (std::size_t i = 0; i + 1 < w.path.size(); ++i) {
    const RuleRecord* chosen = nullptr;
    for (const RuleRecord& r : sat.records(w.path[i]))
      if (uses(r, w.path[i + 1])) {
        chosen = &r;
        break;
      }
    if (!chosen) {
      out.error = "no record for path step " + std::to_string(i);
      return out;
    }
    path_record.push_back(chosen);
  }

  auto start_value = [&](const ValueVec& entry_value) {
    ValueVec v = entry_value;
    for (std::size_t i = path_record.size(); i-- > 0;) {
      std::uint32_t next = w.path[i + 1];
      v = substitute(sat, *path_record[i], [&](std::uint32_t y) { return y == next ? v : base[y]; });
    }
    return v;
  };

  ValueVec entry = base[w.cycle.front()];
  out.entry_values.push_back(entry);
  out.start_values.push_back(start_value(entry));
  for (int k = 0; k < rounds; ++k) {
    ValueVec v = entry;  // value of cycle[(i + 1) % len] while walking backwards
    for (std::size_t i = len; i-- > 0;) {
      std::uint32_t next = w.cycle[(i + 1) % len];
      v = substitute(sat, *step_record[i], [&](std::uint32_t y) { return y == next ? v : base[y]; });
    }
    entry = v;
    out.entry_values.push_back(entry);
    out.start_values.push_back(start_value(entry));
  }
  out.ok = true;
  for (std::size_t k = 1; k < out.entry_values.size(); ++k)
    if (!strictly_greater(out.entry_values[k], out.entry_values[k - 1], letters) ||
        !strictly_greater(out.start_values[k], out.start_values[k - 1], letters)) {
      out.ok = false;
      out.error = "values do not increase in round " + std::to_string(k);
    }
  return out;
}

}  // namespace supsat

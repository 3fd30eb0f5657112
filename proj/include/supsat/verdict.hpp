#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "supsat/saturation.hpp"

namespace supsat {

enum class Outcome { Unbounded, Bounded, Unknown };

std::string to_string(Outcome o);
std::optional<Outcome> parse_outcome(const std::string& s);  // case-insensitive

// A start-reachable closed walk productive in every letter.
struct Witness {
  // Node ids from the start binding to the cycle entry, both included.
  std::vector<std::uint32_t> path;
  // Closed walk starting at the entry: step i is the edge cycle[i] -> cycle[(i+1) % n].
  std::vector<std::uint32_t> cycle;
  // Per letter, the step whose edge is productive in that letter.
  std::vector<std::size_t> productive_steps;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  bool scheme_safe = false;
  std::optional<Witness> witness;
};

// The derivation graph without records.
struct GraphView {
  std::size_t nodes = 0;
  std::vector<GraphEdge> edges;
  std::optional<std::uint32_t> start;  // X_st : (all letters, r)
  std::size_t letters = 0;
};

GraphView graph_view(const Saturation& sat);

// Component index per node; components are numbered in reverse topological order.
std::vector<std::uint32_t> strongly_connected_components(const std::vector<std::vector<std::uint32_t>>& succ);

// A component reachable from the start that has, for every letter, an internal edge
// productive in that letter. Returns the component's nodes (sorted), if any.
std::optional<std::vector<std::uint32_t>> productive_component(const GraphView& g);

// Single-letter criterion, checked edge by edge: a start-reachable edge productive in
// `letter` whose target reaches back to its source.
bool productive_cycle_through_edge(const GraphView& g, std::size_t letter);

Verdict decide(const GraphView& g, bool scheme_safe);
// Uses the scheme's safety and builds a witness when unbounded.
Verdict decide(const Saturation& sat);

std::optional<Witness> find_witness(const GraphView& g);

struct Replay {
  bool ok = false;
  std::string error;
  // Value of the cycle entry before the first and after each traversal.
  std::vector<ValueVec> entry_values;
  // Value of the start binding for the same rounds.
  std::vector<ValueVec> start_values;
};

// Replays the witness `rounds` times from stored records: base values come from the
// records that created each node; each traversal substitutes the previous round's
// derivation for the cycle's next node. ok iff values strictly increase in every letter.
Replay replay_witness(const Saturation& sat, const Witness& w, int rounds = 3);

}  // namespace supsat

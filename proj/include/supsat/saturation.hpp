#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "supsat/flow.hpp"
#include "supsat/scheme.hpp"
#include "supsat/types.hpp"
#include "supsat/typing.hpp"

namespace supsat {

struct SaturationOptions {
  bool ftty = true;   // retype after a new candidate pair, requiring that pair
  bool fntty = true;  // retype after a new binding, requiring that binding
  bool hvo = true;    // parameters outside head positions take demanded pairs
  std::chrono::milliseconds timeout{600'000};
  std::size_t max_bindings = 500'000;
  std::size_t max_partials = 2'000'000;  // per typing call
  bool keep_derivations = true;
  bool reverse = false;  // exploration order inside typing calls
};

struct SaturationStats {
  std::size_t iterations = 0;  // worklist events processed
  std::size_t typing_calls = 0;
  std::size_t bindings = 0;
  std::size_t edges = 0;
  std::size_t productive_edges = 0;
  double ms = 0;
};

// A node of the derivation graph: X : (A, tau).
struct BindingNode {
  NonterminalId nonterminal;
  TyPair binding;
};

struct GraphEdge {
  std::uint32_t from;
  std::uint32_t to;
  ProdSet productive;  // letters a with v(a) > w(a) for some record
};

class Saturation {
 public:
  const Scheme& scheme() const { return *scheme_; }
  TypeTable& types() const { return *types_; }
  std::shared_ptr<TypeTable> type_table() const { return types_; }

  const std::vector<BindingNode>& nodes() const { return nodes_; }
  // Binding pair per node id, as the verifier expects.
  std::vector<TyPair> bindings() const;
  // Maximal records per node; records()[id][0] is the record that created the node.
  const std::vector<RuleRecord>& records(std::uint32_t id) const { return records_[id]; }
  // Sorted by (from, to).
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::vector<std::vector<std::uint32_t>> successors() const;

  std::optional<std::uint32_t> find(NonterminalId x, TyPair binding) const;
  // X_st : (letters, r)
  std::optional<std::uint32_t> start_binding() const;
  // Every X_st : (A, r) in the table.
  std::vector<std::uint32_t> start_nodes() const;
  std::set<std::uint32_t> reachable_from(const std::vector<std::uint32_t>& roots) const;

  const std::vector<TyPair>& candidates(NonterminalId x, std::uint32_t param) const;
  bool hvo_applied(NonterminalId x) const { return hvo_applied_[x]; }

  // X : ({a}, tau)
  std::string render_node(std::uint32_t id) const;
  std::string render_binding(TyPair binding) const;
  // X : (A,tau) value=v via {Y:(B,sigma) xN, ...}, one line per record.
  std::string dump_derivations() const;

  const SaturationStats& stats() const { return stats_; }

 private:
  friend class Saturator;
  std::shared_ptr<const Scheme> scheme_;
  std::shared_ptr<TypeTable> types_;
  std::vector<BindingNode> nodes_;
  std::vector<std::vector<RuleRecord>> records_;
  std::vector<GraphEdge> edges_;
  std::map<std::pair<NonterminalId, std::uint64_t>, std::uint32_t> index_;
  std::vector<std::vector<std::vector<TyPair>>> candidates_;
  std::vector<bool> hvo_applied_;
  SaturationStats stats_;
};

// Whether the head-variable-outside optimization applies to R(X): no parameter heads
// an application and the body is not a bare parameter of arrow sort.
bool hvo_applicable(const Rule& rule);

// Computes the derivable nonterminal bindings reachable through the flow-driven
// strategy, together with the derivation graph. Throws ResourceExceeded on caps.
Saturation saturate(const Scheme& g, const FlowTable& flows, const SaturationOptions& opts = {},
                    std::shared_ptr<TypeTable> types = nullptr);

}  // namespace supsat

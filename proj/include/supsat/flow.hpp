#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "supsat/scheme.hpp"

namespace supsat {

// An argument subterm of a rule body: the spine node `node` of R(rule).
struct Occurrence {
  NonterminalId rule;
  std::uint32_t node;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

// Parameter slot (X, i), 0-based.
using ParamSlot = std::pair<NonterminalId, std::uint32_t>;

class FlowTable {
 public:
  // Occurrences that may be substituted for parameter i of X.
  const std::set<Occurrence>& flows(NonterminalId x, std::uint32_t param) const;
  // Parameter slots the occurrence may be substituted for.
  const std::vector<ParamSlot>& targets(const Occurrence& o) const;
  // Every occurrence flowing into at least one parameter, in order.
  std::vector<Occurrence> occurrences() const;
  std::size_t size() const;

  // One line per parameter: (X, i) <- {Y@path, ...}, i counted from 1.
  std::string dump(const Scheme& g) const;

  friend bool operator==(const FlowTable& a, const FlowTable& b) { return a.flows_ == b.flows_; }

 private:
  friend FlowTable compute_flows(const Scheme& g);
  std::map<ParamSlot, std::set<Occurrence>> flows_;
  std::map<Occurrence, std::vector<ParamSlot>> targets_;
};

// Least fixpoint of the 0-CFA rules: arguments of a nonterminal-headed spine flow
// into its parameters; arguments of a parameter-headed spine flow into the
// parameters of every nonterminal that may be the parameter's value, offset by the
// number of arguments already supplied. Arguments beyond a rule's explicit
// parameters are passed on to the head values of its body.
FlowTable compute_flows(const Scheme& g);

std::string occurrence_name(const Scheme& g, const Occurrence& o);

}  // namespace supsat

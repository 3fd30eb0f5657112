#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "supsat/saturation.hpp"
#include "supsat/scheme.hpp"
#include "supsat/types.hpp"

namespace supsat {

// ---------------------------------------------------------------------------
// Expansion oracle

inline constexpr std::size_t kHeadStepBudget = 10'000;

// Finite prefix of the generated tree; unexpanded or divergent positions are omega.
struct ApproxTree {
  TerminalId label;
  std::vector<ApproxTree> children;

  std::string to_string(const Scheme& g) const;
  friend bool operator==(const ApproxTree&, const ApproxTree&) = default;
};

// Expands `depth` levels of the tree generated from the start symbol.
ApproxTree expand_tree(const Scheme& g, std::size_t depth, std::size_t step_budget = kHeadStepBudget);

// Cuts a tree to `depth` levels, replacing deeper subtrees by omega.
ApproxTree truncate_tree(const ApproxTree& t, std::size_t depth, TerminalId omega);

struct BranchProfile {
  std::size_t depth = 0;
  // Max over finite branches of the min over letters of occurrence counts; nullopt
  // when no finite branch exists.
  std::optional<std::uint32_t> f;
};

BranchProfile branch_profile(const ApproxTree& t, const Scheme& g, std::size_t depth = 0);

struct OracleEvidence {
  bool confirmed = false;
  std::uint32_t max_f = 0;     // capped at the threshold
  bool any_branch = false;     // some finite branch was seen
  std::size_t depth = 0;       // depth at which f reached the threshold, or the depth explored
  bool exhausted = false;      // stopped early on the term budget
  std::vector<std::optional<std::uint32_t>> profile;  // f per depth 1..depth
};

// Sweeps depths 1..depth_budget and reports whether some finite branch carries at
// least `threshold` occurrences of every letter. Never claims boundedness.
OracleEvidence oracle_unbounded_evidence(const Scheme& g, std::size_t depth_budget, std::uint32_t threshold,
                                         std::size_t term_budget = 4'000'000);

// ---------------------------------------------------------------------------
// Naive saturation oracle

struct NaiveOptions {
  std::size_t max_types_per_sort = 20'000;
  std::size_t max_judgments = 3'000'000;
  std::chrono::milliseconds timeout{120'000};
};

struct NaiveResult {
  std::shared_ptr<TypeTable> types;
  std::vector<BindingNode> nodes;
  std::vector<GraphEdge> edges;
  std::optional<std::uint32_t> start;  // X_st : (all letters, r)
  std::size_t rounds = 0;

  std::optional<std::uint32_t> find(NonterminalId x, TyPair b) const;
  std::set<std::uint32_t> reachable_from(const std::vector<std::uint32_t>& roots) const;
  std::vector<std::uint32_t> start_nodes(const Scheme& g) const;
};

// The least fixpoint of derivable nonterminal bindings, enumerating every type of
// every variable's sort, with the derivation graph of all derivations over it.
NaiveResult naive_saturate(const Scheme& g, const NaiveOptions& opts = {},
                           std::shared_ptr<TypeTable> types = nullptr);

}  // namespace supsat

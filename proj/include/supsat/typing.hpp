#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "supsat/scheme.hpp"
#include "supsat/types.hpp"

namespace supsat {

// Gamma |- M : (v, tau), without the term.
struct Judgment {
  TyEnv env;
  ValueVec value;
  TyId ty;

  // {a : v(a) > 0 or env restricted to a is nonempty}
  ProdSet letters() const { return flag_of(value) | env_letters(env); }
  TyPair pair() const { return TyPair{letters(), ty}; }
};

// Literal typing rules, one rule application each.

// Terminal t with the single non-top argument at `child` (0-based) carrying (child_set, r).
// Arity-0 terminals ignore both. std::nullopt for omega or a child index out of range.
std::optional<Judgment> type_constant(const Scheme& g, TerminalId t, std::optional<std::size_t> child,
                                      ProdSet child_set, TypeTable& types);
// x : (A, tau) |- x : (0, tau)
Judgment type_variable(std::uint32_t var, TyPair pair);
// Assumption |- Y : (chi(B), sigma)
Judgment type_assumption(TyPair binding);
// (@): fun's first argument multiset must equal the multiset of args' pairs.
std::optional<Judgment> merge_application(const Judgment& fun, const std::vector<Judgment>& args, std::uint32_t s,
                                          std::size_t letters, TypeTable& types);
// (lambda): moves the bindings of `var` into the argument multiset.
Judgment abstract(const Judgment& body, std::uint32_t var, TypeTable& types);

// Multiset of nonterminal assumptions: (binding id, use count), sorted by id.
using AssumptionSet = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Derivation tree over the spine nodes of one rule body.
struct DerivNode {
  enum class Kind : std::uint8_t { Terminal, Param, Nonterminal };
  std::uint32_t node;  // spine index in Rule::nodes
  Kind kind;
  // Terminal: child position (or none); Param: binding pair; Nonterminal: binding id.
  std::optional<std::uint32_t> child;
  TyPair head_pair{};
  std::uint32_t binding = 0;
  TyId head_type;  // type used for the head symbol
  TyId ty;         // type of the whole spine
  ValueVec value;
  TyEnv env;
  struct Arg {
    std::uint32_t position;  // 0-based argument index of the spine
    TyPair pair;
    std::shared_ptr<const DerivNode> deriv;
  };
  std::vector<Arg> args;
};

// A typed binding of a nonterminal available as an assumption.
struct TableEntry {
  std::uint32_t id;
  TyPair binding;
};

// One derivation outcome for a rule: the nonterminal's binding is (flag(value), ty).
struct RuleRecord {
  TyId ty;
  ValueVec value;
  AssumptionSet assumptions;
  std::shared_ptr<const DerivNode> deriv;

  ProdSet set() const { return flag_of(value); }
  TyPair binding() const { return TyPair{set(), ty}; }
};

struct TypingOptions {
  // Parameters in argument positions accept whatever pair is demanded, instead of
  // only their candidates. Only meaningful when no parameter heads an application.
  bool open_params = false;
  // Keep only derivations that use this binding at least once.
  std::optional<std::uint32_t> forced_binding;
  // Keep only derivations that use parameter `first` at pair `second` at least once.
  std::optional<std::pair<std::uint32_t, TyPair>> forced_param;
  bool keep_derivations = false;
  // Explore candidates and table entries in reverse order (determinism checks).
  bool reverse = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::size_t max_partials = 2'000'000;
};

struct TypingInput {
  const Scheme& scheme;
  NonterminalId rule;
  TypeTable& types;
  // Per nonterminal, the bindings available as assumptions.
  const std::vector<std::vector<TableEntry>>& table;
  // Per parameter of the rule, the pairs it may be used at.
  const std::vector<std::vector<TyPair>>& candidates;
};

// All derivation outcomes for R(X), with types discovered from the used environment.
// Records with equal (binding, assumptions) are collapsed to their maximal values.
std::vector<RuleRecord> type_rule(const TypingInput& in, const TypingOptions& opts = {});

// Derivation outcomes for R(X) at a fixed target type.
std::vector<RuleRecord> type_body(const TypingInput& in, TyId target, const TypingOptions& opts = {});

// Pairs derivable for the spine node `node` of R(X) (used for flowing occurrences),
// with parameters restricted to their candidates. Each pair is reported once.
std::vector<TyPair> type_occurrence(const TypingInput& in, std::uint32_t node, const TypingOptions& opts = {});

// Judgment for an arbitrary spine node under a fixed environment (all derivations).
std::vector<Judgment> judge_node(const TypingInput& in, std::uint32_t node, TyId ty, const TypingOptions& opts = {});

// Re-checks a derivation tree rule by rule with the literal rules above. Returns the
// judgment of the root spine, or std::nullopt with a reason in `error`.
std::optional<Judgment> verify_derivation(const Scheme& g, NonterminalId rule, const DerivNode& d,
                                          const std::vector<TyPair>& bindings, TypeTable& types,
                                          std::string* error = nullptr);
// Verifies a full record: the body derivation, the lambda header and the assumption counts.
bool verify_record(const Scheme& g, NonterminalId rule, const RuleRecord& r, const std::vector<TyPair>& bindings,
                   TypeTable& types, std::string* error = nullptr);

// Canonical order for record lists.
bool record_less(const RuleRecord& a, const RuleRecord& b, const TypeTable& types);

}  // namespace supsat

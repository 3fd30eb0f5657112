#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "supsat/sort.hpp"
#include "supsat/term.hpp"

namespace supsat {

using NonterminalId = std::uint32_t;
using TerminalId = std::uint32_t;

inline constexpr const char* kOmega = "omega";
inline constexpr std::size_t kMaxLetters = 8;
inline constexpr std::size_t kMaxParams = 64;

struct TerminalDecl {
  std::string name;
  unsigned arity;
};

struct NonterminalDecl {
  std::string name;
  Sort sort;
};

// One application spine `head arg1 ... argN` of a lambda-free rule body. Arguments
// are themselves spines, referenced by index into Rule::nodes.
struct SpineNode {
  enum class Head : std::uint8_t { Terminal, Param, Nonterminal };

  Head head_kind;
  std::uint32_t head;  // TerminalId, parameter index or NonterminalId
  std::vector<std::uint32_t> args;
  Sort sort;
  // Argument indices from the body root, e.g. "2.1"; empty for the root.
  std::string path;
  std::optional<std::uint32_t> parent;
  // Nonterminals and parameters occurring anywhere in this subtree.
  std::vector<NonterminalId> nonterminals;
  std::uint64_t params = 0;

  bool contains_param(std::size_t i) const { return (params >> i) & 1u; }
  bool contains_nonterminal(NonterminalId id) const;
};

struct Rule {
  NonterminalId nonterminal;
  std::vector<std::string> param_names;
  std::vector<Sort> param_sorts;
  Term body;  // lambda-free part after the parameter binders
  std::vector<SpineNode> nodes;
  std::uint32_t root = 0;

  std::size_t param_count() const { return param_names.size(); }
  // True when some parameter is the head of a spine with at least one argument.
  bool has_param_in_head_position() const;
};

// Unvalidated scheme pieces; Scheme::build checks every invariant.
struct SchemeDraft {
  std::vector<TerminalDecl> terminals;
  std::vector<NonterminalDecl> nonterminals;
  struct RuleDraft {
    std::string nonterminal;
    std::vector<Term> params;  // variables
    Term body;
  };
  std::vector<RuleDraft> rules;
  std::string start;
  std::vector<std::string> important;
};

// A validated higher-order recursion scheme. Immutable after construction.
class Scheme {
 public:
  static Scheme build(SchemeDraft draft);

  const std::vector<TerminalDecl>& terminals() const { return terminals_; }
  const std::vector<NonterminalDecl>& nonterminals() const { return nonterminals_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(NonterminalId id) const { return rules_[id]; }
  NonterminalId start() const { return start_; }
  TerminalId omega() const { return omega_; }

  std::optional<TerminalId> find_terminal(const std::string& name) const;
  std::optional<NonterminalId> find_nonterminal(const std::string& name) const;

  // Important letters, in declaration order.
  const std::vector<TerminalId>& important() const { return important_; }
  std::size_t letter_count() const { return important_.size(); }
  std::vector<std::string> letter_names() const;
  // Index of the terminal among the important letters, if it is one.
  std::optional<std::size_t> letter_of(TerminalId t) const;
  // Multiplicity cap for s-multisets: the number of letters, at least 1.
  std::size_t multiplicity_cap() const;

  Scheme with_important(const std::vector<std::string>& letters) const;

  // R(X) as a closed lambda-term (nonterminals aside).
  Term rule_term(NonterminalId id) const;

  // Order of the scheme: maximum complexity over rule right-hand sides.
  unsigned order() const;

  // Parsable text for this scheme.
  std::string to_text() const;

 private:
  Scheme() = default;
  void compile_rule(Rule& rule);

  std::vector<TerminalDecl> terminals_;
  std::vector<NonterminalDecl> nonterminals_;
  std::vector<Rule> rules_;
  NonterminalId start_ = 0;
  TerminalId omega_ = 0;
  std::vector<TerminalId> important_;
  std::vector<int> letter_index_;
  std::unordered_map<std::string, TerminalId> terminal_index_;
  std::unordered_map<std::string, NonterminalId> nonterminal_index_;
};

}  // namespace supsat

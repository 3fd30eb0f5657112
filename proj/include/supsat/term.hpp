#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "supsat/sort.hpp"

namespace supsat {

// Finite simply-sorted lambda-term over constants, variables and nonterminals.
// Construction checks sorts; a Term is always well-sorted.
class Term {
 public:
  enum class Kind { Constant, Variable, Nonterminal, Application, Abstraction };

  static Term constant(std::string name, unsigned arity);
  static Term variable(std::string name, Sort sort);
  static Term nonterminal(std::string name, Sort sort);
  // Throws SortError unless fun : a -> b and arg : a.
  static Term apply(Term fun, Term arg);
  static Term apply(Term fun, std::initializer_list<Term> args);
  // `param` must be a variable.
  static Term lambda(Term param, Term body);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const std::string& name() const;
  const Sort& sort() const;
  // Declared arity of a constant.
  unsigned arity() const;

  const Term& fun() const;
  const Term& arg() const;
  const Term& param() const;
  const Term& body() const;

  // Head of the application spine and its arguments, left to right.
  const Term& head() const;
  std::vector<Term> spine_args() const;

  // Free variables by name. Nonterminals are never free variables.
  std::map<std::string, Sort> free_variables() const;

  bool structurally_equal(const Term& other) const;
  std::string to_string() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind;
  std::string name;
  Sort sort;
  unsigned arity = 0;
  std::vector<Term> children;  // {fun, arg} or {param, body}
};

inline Term::Kind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Sort& Term::sort() const { return node_->sort; }
inline unsigned Term::arity() const { return node_->arity; }

}  // namespace supsat

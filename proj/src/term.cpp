#include "supsat/term.hpp"

#include <stdexcept>

#include "supsat/error.hpp"

namespace supsat {

Term Term::constant(std::string name, unsigned arity) {
  return Term(std::make_shared<const Node>(Node{Kind::Constant, std::move(name), Sort::first_order(arity), arity, {}}));
}

Term Term::variable(std::string name, Sort sort) {
  return Term(std::make_shared<const Node>(Node{Kind::Variable, std::move(name), std::move(sort), 0, {}}));
}

Term Term::nonterminal(std::string name, Sort sort) {
  return Term(std::make_shared<const Node>(Node{Kind::Nonterminal, std::move(name), std::move(sort), 0, {}}));
}

Term Term::apply(Term fun, Term arg) {
  if (fun.sort().is_base())
    throw SortError("cannot apply " + fun.to_string() + " of sort o to an argument");
  if (fun.sort().argument() != arg.sort())
    throw SortError("argument " + arg.to_string() + " has sort " + arg.sort().to_string() + ", expected " +
                    fun.sort().argument().to_string());
  Sort result = fun.sort().result();
  return Term(std::make_shared<const Node>(Node{Kind::Application, "", std::move(result), 0, {std::move(fun), std::move(arg)}}));
}

Term Term::apply(Term fun, std::initializer_list<Term> args) {
  for (const Term& a : args) fun = apply(std::move(fun), a);
  return fun;
}

Term Term::lambda(Term param, Term body) {
  if (!param.is(Kind::Variable)) throw SortError("lambda parameter must be a variable");
  Sort s = Sort::arrow(param.sort(), body.sort());
  return Term(std::make_shared<const Node>(Node{Kind::Abstraction, "", std::move(s), 0, {std::move(param), std::move(body)}}));
}

const Term& Term::fun() const {
  if (!is(Kind::Application)) throw std::logic_error("fun() on non-application");
  return node_->children[0];
}

const Term& Term::arg() const {
  if (!is(Kind::Application)) throw std::logic_error("arg() on non-application");
  return node_->children[1];
}

const Term& Term::param() const {
  if (!is(Kind::Abstraction)) throw std::logic_error("param() on non-abstraction");
  return node_->children[0];
}

const Term& Term::body() const {
  if (!is(Kind::Abstraction)) throw std::logic_error("body() on non-abstraction");
  return node_->children[1];
}

const Term& Term::head() const {
  const Term* t = this;
  while (t->is(Kind::Application)) t = &t->fun();
  return *t;
}

std::vector<Term> Term::spine_args() const {
  std::vector<Term> args;
  const Term* t = this;
  while (t->is(Kind::Application)) {
    args.push_back(t->arg());
    t = &t->fun();
  }
  return {args.rbegin(), args.rend()};
}

std::map<std::string, Sort> Term::free_variables() const {
  std::map<std::string, Sort> out;
  switch (kind()) {
    case Kind::Variable:
      out.emplace(name(), sort());
      break;
    case Kind::Application: {
      out = fun().free_variables();
      for (auto& kv : arg().free_variables()) out.insert(kv);
      break;
    }
    case Kind::Abstraction:
      out = body().free_variables();
      out.erase(param().name());
      break;
    default:
      break;
  }
  return out;
}

bool Term::structurally_equal(const Term& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || name() != other.name() || sort() != other.sort() || arity() != other.arity())
    return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i)
    if (!node_->children[i].structurally_equal(other.node_->children[i])) return false;
  return true;
}

std::string Term::to_string() const {
  switch (kind()) {
    case Kind::Constant:
    case Kind::Variable:
    case Kind::Nonterminal:
      return name();
    case Kind::Application: {
      std::string rhs = arg().to_string();
      if (arg().is(Kind::Application) || arg().is(Kind::Abstraction)) rhs = "(" + rhs + ")";
      std::string lhs = fun().to_string();
      if (fun().is(Kind::Abstraction)) lhs = "(" + lhs + ")";
      return lhs + " " + rhs;
    }
    case Kind::Abstraction:
      return "\\" + param().name() + ":" + param().sort().to_string() + ". " + body().to_string();
  }
  return {};
}

}  // namespace supsat

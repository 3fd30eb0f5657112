#include "supsat/structure.hpp"

#include <algorithm>

#include "supsat/scheme.hpp"

namespace supsat {

unsigned term_complexity(const Term& t) {
  unsigned here = t.head().is(Term::Kind::Constant) ? 0 : t.sort().order();
  switch (t.kind()) {
    case Term::Kind::Application:
      return std::max({here, term_complexity(t.fun()), term_complexity(t.arg())});
    case Term::Kind::Abstraction:
      return std::max(here, term_complexity(t.body()));
    default:
      return here;
  }
}

bool is_superficially_safe(const Term& t) {
  unsigned order = t.sort().order();
  for (const auto& [name, sort] : t.free_variables())
    if (order > sort.order()) return false;
  return true;
}

namespace {

bool subterms_safe(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Application: {
      if (!is_superficially_safe(t.head())) return false;
      for (const Term& a : t.spine_args())
        if (!is_superficially_safe(a)) return false;
      return subterms_safe(t.fun()) && subterms_safe(t.arg());
    }
    case Term::Kind::Abstraction:
      return subterms_safe(t.body());
    default:
      return true;
  }
}

}  // namespace

bool is_homogeneous(const Term& t) {
  if (!is_homogeneous_sort(t.sort())) return false;
  switch (t.kind()) {
    case Term::Kind::Application:
      return is_homogeneous(t.fun()) && is_homogeneous(t.arg());
    case Term::Kind::Abstraction:
      return is_homogeneous(t.param()) && is_homogeneous(t.body());
    default:
      return true;
  }
}

bool is_safe(const Term& t) { return is_superficially_safe(t) && subterms_safe(t); }

bool scheme_is_safe(const Scheme& g) {
  for (std::size_t i = 0; i < g.rules().size(); ++i)
    if (!is_safe(g.rule_term(static_cast<NonterminalId>(i)))) return false;
  return true;
}

bool is_homogeneous_sort(const Sort& s) {
  unsigned previous = ~0u;
  for (const Sort& a : s.arguments()) {
    if (a.order() > previous || !is_homogeneous_sort(a)) return false;
    previous = a.order();
  }
  return true;
}

bool scheme_is_homogeneous(const Scheme& g) {
  for (std::size_t i = 0; i < g.rules().size(); ++i)
    if (!is_homogeneous(g.rule_term(static_cast<NonterminalId>(i)))) return false;
  return true;
}

}  // namespace supsat

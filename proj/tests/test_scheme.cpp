#include <functional>
#include <random>

#include "doctest.h"
#include "structural_cases.hpp"
#include "support.hpp"
#include "supsat/error.hpp"
#include "supsat/structure.hpp"

using namespace supsat;

TEST_CASE("parse a one-rule scheme") {
  Scheme g = parse_scheme("%BEGING S -> a c. %ENDG %BEGINT a -> 1. c -> 0. %ENDT");
  REQUIRE(g.rules().size() == 1);
  CHECK(g.nonterminals()[g.start()].name == "S");
  CHECK(g.rule(0).body.to_string() == "a c");
  CHECK(g.letter_count() == 0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> a c. %ENDG %BEGINT a -> 2. c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> c. S -> a c. %ENDG %BEGINT a -> 1. c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> d. %ENDG %BEGINT c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> T. T -> c. %ENDG %BEGINT c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S x -> x. %ENDG %BEGINT c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> F c. F x -> x x. %ENDG %BEGINT c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> a c %ENDG %BEGINT a -> 1. c -> 0. %ENDT"), InputError);
  CHECK_THROWS_AS(parse_scheme("%BEGING S -> omega. %ENDG %BEGINT omega -> 1. %ENDT"), InputError);
}

TEST_CASE("parse error carries a position") {
  try {
    parse_scheme("%BEGING\nS -> a (c.\n%ENDG\n%BEGINT a -> 1. c -> 0. %ENDT");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("important letters") {
  Scheme g = testing::make_scheme("S -> br c (a S).", "br -> 2. a -> 1. c -> 0.", "a");
  REQUIRE(g.letter_count() == 1);
  CHECK(g.letter_names() == std::vector<std::string>{"a"});
  CHECK(g.multiplicity_cap() == 1);
  CHECK_THROWS_AS(g.with_important({"d"}), InputError);
  CHECK_THROWS_AS(g.with_important({"omega"}), InputError);
  CHECK(g.with_important({"a", "br"}).multiplicity_cap() == 2);
}

TEST_CASE("sort order examples") {
  Sort o = Sort::base();
  CHECK(sort_order(o) == 0);
  CHECK(sort_order(Sort::arrow(o, o)) == 1);
  CHECK(sort_order(Sort::arrow(Sort::arrow(o, o), o)) == 2);
}

namespace {

// Sorts as plain trees, with the textbook recursion as reference.
struct RefSort {
  std::vector<RefSort> kids;  // empty: base; else {argument, result}
};

unsigned ref_order(const RefSort& s) {
  if (s.kids.empty()) return 0;
  return std::max(1 + ref_order(s.kids[0]), ref_order(s.kids[1]));
}

RefSort random_ref(std::mt19937& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return {};
  return RefSort{{random_ref(rng, depth - 1), random_ref(rng, depth - 1)}};
}

Sort to_sort(const RefSort& r) {
  return r.kids.empty() ? Sort::base() : Sort::arrow(to_sort(r.kids[0]), to_sort(r.kids[1]));
}

}  // namespace

TEST_CASE("sort order agrees with the reference on random sorts") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    RefSort r = random_ref(rng, 6);
    CHECK(sort_order(to_sort(r)) == ref_order(r));
  }
}

TEST_CASE("term complexity examples") {
  Sort o = Sort::base(), oo = Sort::arrow(o, o);
  Term a = Term::constant("a", 1), c = Term::constant("c", 0);
  CHECK(term_complexity(Term::apply(a, c)) == 0);
  Term x = Term::variable("x", o);
  CHECK(term_complexity(Term::lambda(x, x)) == 1);
  Term y = Term::variable("y", oo), z = Term::variable("z", o);
  Term t = Term::lambda(y, Term::lambda(z, Term::apply(y, Term::apply(y, Term::apply(a, z)))));
  CHECK(term_complexity(t) == 2);
}

TEST_CASE("superficial safety examples") {
  Sort o = Sort::base();
  Term x = Term::variable("x", o), y = Term::variable("y", o);
  CHECK(is_superficially_safe(Term::lambda(x, x)));
  CHECK_FALSE(is_superficially_safe(Term::lambda(y, x)));
  CHECK(is_superficially_safe(x));
}

TEST_CASE("structural cases") {
  for (const auto& c : testing::structural_cases()) {
    INFO(c.label);
    CHECK(is_superficially_safe(c.term) == c.superficially_safe);
    CHECK(is_safe(c.term) == c.safe);
    CHECK(is_homogeneous(c.term) == c.homogeneous);
  }
}

TEST_CASE("homogeneous sorts") {
  Sort o = Sort::base(), oo = Sort::arrow(o, o);
  CHECK(is_homogeneous_sort(oo));
  CHECK_FALSE(is_homogeneous_sort(Sort::arrow(o, Sort::arrow(oo, o))));
  CHECK(is_homogeneous_sort(Sort::arrow(oo, oo)));
}

TEST_CASE("scheme safety and order") {
  Scheme g = testing::make_scheme("S -> a c.", "a -> 1. c -> 0.", "a");
  CHECK(scheme_is_safe(g));
  CHECK(g.order() == 0);
  Scheme h = testing::make_scheme("S -> F c. F x -> H (G x). H f -> f c. G x y -> br x y.", "br -> 2. c -> 0.", "br");
  CHECK_FALSE(scheme_is_safe(h));
  CHECK(h.order() == 2);
}

TEST_CASE("print and re-parse round-trip") {
  testing::SchemeGen gen(11);
  for (int i = 0; i < 200; ++i) {
    Scheme g = gen.scheme();
    Scheme back = parse_scheme(g.to_text());
    REQUIRE(back.rules().size() == g.rules().size());
    CHECK(back.to_text() == g.to_text());
    for (std::size_t r = 0; r < g.rules().size(); ++r) {
      CHECK(back.nonterminals()[r].name == g.nonterminals()[r].name);
      CHECK(back.nonterminals()[r].sort == g.nonterminals()[r].sort);
      CHECK(back.rule_term(r).structurally_equal(g.rule_term(r)));
    }
  }
  for (const auto& e : testing::load_corpus()) {
    INFO(e.name);
    Scheme back = parse_scheme(e.scheme.to_text());
    CHECK(back.to_text() == e.scheme.to_text());
  }
}

TEST_CASE("corpus metadata matches the structural analyses") {
  for (const auto& e : testing::load_corpus()) {
    INFO(e.name);
    CHECK(e.scheme.order() == e.declared_order);
    CHECK(scheme_is_safe(e.scheme) == e.declared_safe);
  }
}

namespace {

// Substitutes closed terms for nonterminals, one level.
Term substitute(const Term& t, const std::function<std::optional<Term>(const Term&)>& f) {
  if (auto r = f(t)) return *r;
  switch (t.kind()) {
    case Term::Kind::Application: return Term::apply(substitute(t.fun(), f), substitute(t.arg(), f));
    case Term::Kind::Abstraction: return Term::lambda(t.param(), substitute(t.body(), f));
    default: return t;
  }
}

}  // namespace

TEST_CASE("safety survives closing substitutions") {
  for (const auto& e : testing::load_corpus()) {
    const Scheme& g = e.scheme;
    if (!scheme_is_safe(g)) continue;
    INFO(e.name);
    auto unfold = [&](const Term& t) -> std::optional<Term> {
      if (!t.is(Term::Kind::Nonterminal)) return std::nullopt;
      return g.rule_term(*g.find_nonterminal(t.name()));
    };
    for (std::size_t r = 0; r < g.rules().size(); ++r) {
      Term once = substitute(g.rule_term(r), unfold);
      Term twice = substitute(once, unfold);
      CHECK(is_superficially_safe(once));
      CHECK(is_superficially_safe(twice));
    }
  }
}

#include "doctest.h"
#include "support.hpp"
#include "worked_example.hpp"
#include "supsat/flow.hpp"
#include "supsat/saturation.hpp"

using namespace supsat;

TEST_CASE("worked example through the engine") {
  std::vector<std::string> errors;
  bool ok = testing::check_worked_example(errors);
  for (const auto& e : errors) MESSAGE(e);
  CHECK(ok);
}

TEST_CASE("worked example with the literal rules") {
  testing::WorkedExample w;
  TypeTable& t = w.types;
  TerminalId a = *w.g.find_terminal("a");
  auto ja = type_constant(w.g, a, 0, ProdSet::single(0), t);
  REQUIRE(ja);
  CHECK(ja->value[0] == 1);
  CHECK(ja->ty == w.sigma);
  Judgment jz = type_variable(1, w.pr_r);
  auto jaz = merge_application(*ja, {jz}, 1, 1, t);
  REQUIRE(jaz);
  CHECK(jaz->value[0] == 1);
  Judgment jy = type_variable(0, w.y_pr);
  auto jyaz = merge_application(jy, {*jaz}, 1, 1, t);
  REQUIRE(jyaz);
  CHECK(jyaz->value[0] == 1);
  auto root = merge_application(jy, {*jyaz}, 1, 1, t);
  REQUIRE(root);
  CHECK(root->value[0] == 2);
  CHECK(root->env.size() == 2);
  Judgment lz = abstract(*root, 1, t);
  Judgment ly = abstract(lz, 0, t);
  CHECK(ly.env.empty());
  CHECK(ly.value[0] == 2);
  CHECK(ly.ty == t.arrow({w.y_pr}, t.arrow({w.pr_r}, t.atom())));

  Judgment jyn = type_variable(0, w.y_np);
  auto n1 = merge_application(jyn, {*jaz}, 1, 1, t);
  REQUIRE(n1);
  auto n2 = merge_application(jyn, {*n1}, 1, 1, t);
  REQUIRE(n2);
  CHECK(n2->value[0] == 1);
}

TEST_CASE("constant rules") {
  Scheme g = testing::make_scheme("S -> br c (a c).", "br -> 2. a -> 1. c -> 0.", "a");
  TypeTable t;
  TyPair pr{ProdSet::single(0), t.atom()};
  auto ja = type_constant(g, *g.find_terminal("a"), 0, ProdSet::single(0), t);
  REQUIRE(ja);
  CHECK(ja->value == ValueVec::chi(ProdSet::single(0)));
  CHECK(ja->ty == t.arrow({pr}, t.atom()));
  auto jc = type_constant(g, *g.find_terminal("c"), std::nullopt, ProdSet::none(), t);
  REQUIRE(jc);
  CHECK(jc->value.is_zero());
  CHECK(jc->ty == t.atom());
  auto jb = type_constant(g, *g.find_terminal("br"), 1, ProdSet::single(0), t);
  REQUIRE(jb);
  CHECK(jb->value.is_zero());
  CHECK(jb->ty == t.top_arrow(t.arrow({pr}, t.atom())));
  CHECK_FALSE(type_constant(g, g.omega(), std::nullopt, ProdSet::none(), t));
}

TEST_CASE("application rule") {
  TypeTable t;
  Judgment top;
  top.ty = t.top_arrow(t.atom());
  top.value = ValueVec::chi(ProdSet::single(0));
  auto j = merge_application(top, {}, 1, 1, t);
  REQUIRE(j);
  CHECK(j->value == top.value);
  CHECK(j->ty == t.atom());

  // side condition: argument's letters must match the demanded set
  TyPair pr{ProdSet::single(0), t.atom()};
  Judgment f;
  f.ty = t.arrow({pr}, t.atom());
  Judgment zero;
  zero.ty = t.atom();
  CHECK_FALSE(merge_application(f, {zero}, 1, 1, t));

  // disjoint productive environments add without duplication
  Judgment g2;
  g2.ty = t.arrow({pr, pr}, t.atom());
  Judgment x = type_variable(0, pr), y = type_variable(1, pr);
  auto sum = merge_application(g2, {x, y}, 2, 1, t);
  REQUIRE(sum);
  CHECK(sum->value.is_zero());
  auto dup = merge_application(g2, {x, x}, 2, 1, t);
  REQUIRE(dup);
  CHECK(dup->value.is_zero());  // s = 2 keeps both copies
  Judgment g1;
  g1.ty = t.arrow({pr}, t.atom());
  auto once = merge_application(g1, {x}, 1, 1, t);
  REQUIRE(once);
  Judgment fx = type_variable(2, TyPair{ProdSet::single(0), g1.ty});
  auto twice = merge_application(fx, {*once}, 1, 1, t);
  REQUIRE(twice);
  CHECK(twice->value.is_zero());  // distinct variables, nothing duplicated
}

namespace {

struct Fixture {
  Scheme g;
  std::shared_ptr<TypeTable> types = std::make_shared<TypeTable>();
  Saturation sat;

  explicit Fixture(Scheme s)
      : g(std::move(s)), sat(saturate(g, compute_flows(g), {}, types)) {}

  std::vector<std::vector<TableEntry>> table() const {
    std::vector<std::vector<TableEntry>> out(g.nonterminals().size());
    for (std::uint32_t id = 0; id < sat.nodes().size(); ++id)
      out[sat.nodes()[id].nonterminal].push_back(TableEntry{id, sat.nodes()[id].binding});
    return out;
  }
  std::vector<std::vector<TyPair>> candidates(NonterminalId x) const {
    std::vector<std::vector<TyPair>> out;
    for (std::uint32_t i = 0; i < g.rule(x).param_count(); ++i) out.push_back(sat.candidates(x, i));
    return out;
  }
};

std::vector<std::string> render(const std::vector<RuleRecord>& rs, const TypeTable& t, std::size_t letters) {
  std::vector<std::string> out;
  for (const auto& r : rs) {
    std::string s = t.render(r.ty, {"a", "b"}) + " v=" + r.value.to_string(letters) + " via";
    for (auto [id, n] : r.assumptions) s += " " + std::to_string(id) + "x" + std::to_string(n);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("typing is independent of exploration order") {
  testing::SchemeGen gen(21);
  for (int i = 0; i < 60; ++i) {
    Fixture fx(gen.scheme(i % 2 ? "a,b" : "a"));
    auto table = fx.table();
    for (NonterminalId x = 0; x < fx.g.rules().size(); ++x) {
      auto cand = fx.candidates(x);
      TypingInput in{fx.g, x, *fx.types, table, cand};
      TypingOptions fwd, rev;
      rev.reverse = true;
      CHECK(render(type_rule(in, fwd), *fx.types, fx.g.letter_count()) ==
            render(type_rule(in, rev), *fx.types, fx.g.letter_count()));
    }
  }
}

TEST_CASE("typing is monotone in candidates and table") {
  testing::SchemeGen gen(23);
  for (int i = 0; i < 60; ++i) {
    Fixture fx(gen.scheme("a"));
    auto full = fx.table();
    auto& rng = gen.rng();
    for (NonterminalId x = 0; x < fx.g.rules().size(); ++x) {
      auto cand = fx.candidates(x);
      auto small_cand = cand;
      for (auto& c : small_cand)
        if (!c.empty() && rng() % 2) c.pop_back();
      auto small_table = full;
      for (auto& e : small_table)
        if (!e.empty() && rng() % 2) e.pop_back();
      TypingInput big{fx.g, x, *fx.types, full, cand};
      TypingInput small{fx.g, x, *fx.types, small_table, small_cand};
      auto rb = type_rule(big, {});
      for (const RuleRecord& r : type_rule(small, {})) {
        bool found = std::any_of(rb.begin(), rb.end(), [&](const RuleRecord& q) {
          return q.ty == r.ty && q.assumptions == r.assumptions && q.value.dominates(r.value);
        });
        CHECK(found);
      }
    }
  }
}

TEST_CASE("no important letters means zero values") {
  testing::SchemeGen gen(29);
  for (int i = 0; i < 40; ++i) {
    Scheme g = gen.scheme("a").with_important({});
    auto types = std::make_shared<TypeTable>();
    Saturation sat = saturate(g, compute_flows(g), {}, types);
    for (std::uint32_t id = 0; id < sat.nodes().size(); ++id)
      for (const RuleRecord& r : sat.records(id)) CHECK(r.value.is_zero());
  }
}

TEST_CASE("records verify bottom-up") {
  testing::SchemeGen gen(31);
  for (int i = 0; i < 60; ++i) {
    Fixture fx(gen.scheme(i % 3 ? "a" : "a,b"));
    auto bindings = fx.sat.bindings();
    for (std::uint32_t id = 0; id < fx.sat.nodes().size(); ++id)
      for (const RuleRecord& r : fx.sat.records(id)) {
        std::string why;
        bool ok = verify_record(fx.g, fx.sat.nodes()[id].nonterminal, r, bindings, *fx.types, &why);
        INFO(why);
        CHECK(ok);
        CHECK(r.binding() == fx.sat.nodes()[id].binding);
      }
  }
}

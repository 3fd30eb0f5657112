#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "supsat/flow.hpp"
#include "supsat/oracle.hpp"
#include "supsat/saturation.hpp"
#include "supsat/error.hpp"

using namespace supsat;

namespace {

Saturation run(const Scheme& g, SaturationOptions o = {}, std::shared_ptr<TypeTable> t = nullptr) {
  return saturate(g, compute_flows(g), o, std::move(t));
}

using BindingSet = std::set<std::pair<NonterminalId, std::uint64_t>>;

BindingSet reachable_bindings(const Saturation& sat) {
  BindingSet out;
  for (std::uint32_t id : sat.reachable_from(sat.start_nodes()))
    out.insert({sat.nodes()[id].nonterminal, sat.nodes()[id].binding.packed()});
  return out;
}

std::set<std::string> rendered_reachable(const Saturation& sat) {
  std::set<std::string> out;
  for (std::uint32_t id : sat.reachable_from(sat.start_nodes())) out.insert(sat.render_node(id));
  return out;
}

std::vector<SaturationOptions> all_combos() {
  std::vector<SaturationOptions> out;
  for (int m = 0; m < 8; ++m) {
    SaturationOptions o;
    o.ftty = !(m & 1);
    o.fntty = !(m & 2);
    o.hvo = !(m & 4);
    out.push_back(o);
  }
  return out;
}

}  // namespace

TEST_CASE("constant tree has one binding and no edges") {
  Scheme g = testing::make_scheme("S -> a c.", "a -> 1. c -> 0.", "a");
  Saturation sat = run(g);
  REQUIRE(sat.nodes().size() == 1);
  CHECK(sat.render_node(0) == "S : ({a}, r)");
  CHECK(sat.edges().empty());
  CHECK(sat.records(0)[0].assumptions.empty());
  CHECK(sat.start_binding() == 0u);
}

TEST_CASE("self loop is productive") {
  Scheme g = testing::make_scheme("S -> br c (a S).", "br -> 2. a -> 1. c -> 0.", "a");
  Saturation sat = run(g);
  TyPair pr{ProdSet::single(0), sat.types().atom()};
  auto s = sat.find(g.start(), pr);
  REQUIRE(s);
  bool loop = false;
  for (const GraphEdge& e : sat.edges())
    if (e.from == *s && e.to == *s) loop = e.productive == ProdSet::single(0);
  CHECK(loop);
}

TEST_CASE("a spine without leaves has no binding") {
  Scheme g = testing::make_scheme("S -> a S.", "a -> 1.", "a");
  Saturation sat = run(g);
  CHECK(sat.nodes().empty());
  CHECK_FALSE(sat.start_binding());
  NaiveResult naive = naive_saturate(g);
  CHECK(naive.nodes.empty());
}

TEST_CASE("head-variable-outside applicability") {
  Scheme g = testing::make_scheme("S -> G F.\nG h -> h c.\nF x -> a x.", "a -> 1. c -> 0.", "a");
  CHECK(hvo_applicable(g.rule(*g.find_nonterminal("F"))));
  CHECK_FALSE(hvo_applicable(g.rule(*g.find_nonterminal("G"))));
  Saturation sat = run(g);
  CHECK(sat.hvo_applied(*g.find_nonterminal("F")));
  CHECK_FALSE(sat.hvo_applied(*g.find_nonterminal("G")));
}

TEST_CASE("all flag combinations agree") {
  std::vector<Scheme> schemes;
  for (const auto& e : testing::load_corpus()) schemes.push_back(e.scheme);
  testing::SchemeGen gen(51);
  for (int i = 0; i < 60; ++i) schemes.push_back(gen.scheme(i % 2 ? "a" : "a,b"));
  for (const Scheme& g : schemes) {
    auto combos = all_combos();
    std::set<std::string> reference = rendered_reachable(run(g, combos[0]));
    for (std::size_t k = 1; k < combos.size(); ++k) CHECK(rendered_reachable(run(g, combos[k])) == reference);
  }
}

TEST_CASE("saturation is deterministic") {
  for (const auto& e : testing::load_corpus()) {
    INFO(e.name);
    SaturationOptions rev;
    rev.reverse = true;
    Saturation a = run(e.scheme), b = run(e.scheme), c = run(e.scheme, rev);
    CHECK(a.dump_derivations() == b.dump_derivations());
    std::set<std::string> na, nc;
    for (std::uint32_t i = 0; i < a.nodes().size(); ++i) na.insert(a.render_node(i));
    for (std::uint32_t i = 0; i < c.nodes().size(); ++i) nc.insert(c.render_node(i));
    CHECK(na == nc);
    CHECK(rendered_reachable(a) == rendered_reachable(c));
  }
}

TEST_CASE("stored records verify and justify every edge") {
  for (const auto& e : testing::load_corpus()) {
    INFO(e.name);
    auto types = std::make_shared<TypeTable>();
    Saturation sat = run(e.scheme, {}, types);
    auto bindings = sat.bindings();
    std::map<std::pair<std::uint32_t, std::uint32_t>, ProdSet> justified;
    for (std::uint32_t id = 0; id < sat.nodes().size(); ++id) {
      REQUIRE(!sat.records(id).empty());
      for (const RuleRecord& r : sat.records(id)) {
        std::string why;
        CHECK_MESSAGE(verify_record(e.scheme, sat.nodes()[id].nonterminal, r, bindings, *types, &why), why);
        for (auto [to, count] : r.assumptions) {
          ProdSet prod;
          ValueVec w = ValueVec::chi(bindings[to].set);
          for (std::size_t a = 0; a < e.scheme.letter_count(); ++a)
            if (r.value[a] > w[a]) prod |= ProdSet::single(a);
          justified[{id, to}] |= prod;
        }
      }
    }
    REQUIRE(justified.size() == sat.edges().size());
    for (const GraphEdge& edge : sat.edges()) {
      auto it = justified.find({edge.from, edge.to});
      REQUIRE(it != justified.end());
      CHECK(it->second == edge.productive);
    }
  }
}

TEST_CASE("start-reachable bindings match the naive saturator") {
  for (const auto& e : testing::load_corpus()) {
    if (e.scheme.order() > 2) continue;
    INFO(e.name);
    auto types = std::make_shared<TypeTable>();
    Saturation sat = run(e.scheme, {}, types);
    NaiveResult naive = naive_saturate(e.scheme, {}, types);
    BindingSet ns;
    for (std::uint32_t id : naive.reachable_from(naive.start_nodes(e.scheme)))
      ns.insert({naive.nodes[id].nonterminal, naive.nodes[id].binding.packed()});
    CHECK(reachable_bindings(sat) == ns);
  }
}

TEST_CASE("naive saturator examples") {
  Scheme g = testing::make_scheme("S -> a c.\nU x -> a x.", "a -> 1. c -> 0.", "a");
  auto types = std::make_shared<TypeTable>();
  NaiveResult n = naive_saturate(g, {}, types);
  TyPair pr{ProdSet::single(0), types->atom()}, np{ProdSet::none(), types->atom()};
  CHECK(n.find(g.start(), pr));
  NonterminalId u = *g.find_nonterminal("U");
  CHECK(n.find(u, TyPair{ProdSet::single(0), types->arrow({np}, types->atom())}));
  CHECK(n.find(u, TyPair{ProdSet::single(0), types->arrow({pr}, types->atom())}));

  Scheme loop = testing::make_scheme("S -> br c (a S).", "br -> 2. a -> 1. c -> 0.", "a");
  NaiveResult nl = naive_saturate(loop, {}, types);
  auto s = nl.find(loop.start(), pr);
  REQUIRE(s);
  bool self = false;
  for (const GraphEdge& e : nl.edges) self |= e.from == *s && e.to == *s && e.productive == ProdSet::single(0);
  CHECK(self);
}

TEST_CASE("binding cap is reported as a resource error") {
  Scheme g = testing::make_scheme("S -> F c.\nF x -> br x (F (a x)).", "br -> 2. a -> 1. c -> 0.", "a");
  SaturationOptions o;
  o.max_bindings = 1;
  CHECK_THROWS_AS(run(g, o), ResourceExceeded);
}

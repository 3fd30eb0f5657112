#include <set>
#include <thread>
#include <map>
#include <random>

#include "doctest.h"
#include "supsat/types.hpp"

using namespace supsat;

namespace {

using IntSet = SMultiset<int>;

IntSet ms(std::initializer_list<int> xs, std::uint32_t s) {
  IntSet m;
  for (int x : xs) m.add(x, 1, s);
  return m;
}

EnvBinding bind(std::uint32_t var, ProdSet set, TyId ty = TyId{0}) { return EnvBinding{var, TyPair{set, ty}}; }

TyEnv env(std::initializer_list<EnvBinding> bs, std::uint32_t s) {
  TyEnv e;
  for (const auto& b : bs) e.add(b, 1, s);
  return e;
}

}  // namespace

TEST_CASE("s-multiset union examples") {
  CHECK(smultiset_union(ms({1, 1}, 3), ms({1, 1}, 3), 3).count(1) == 3);
  IntSet v = ms({2, 3, 3}, 3);
  CHECK(smultiset_union(IntSet{}, v, 3) == v);
  IntSet u = smultiset_union(ms({1}, 1), ms({2}, 1), 1);
  CHECK(u.count(1) == 1);
  CHECK(u.count(2) == 1);
  CHECK(u.size() == 2);
}

TEST_CASE("s-multiset union law on random multisets") {
  std::mt19937 rng(3);
  for (std::uint32_t s : {1u, 2u, 3u}) {
    for (int i = 0; i < 500; ++i) {
      std::map<int, std::uint32_t> cu, cv;
      IntSet u, v;
      for (int k = 0; k < 6; ++k) {
        int x = static_cast<int>(rng() % 5);
        u.add(x, 1, s);
        cu[x] = std::min(cu[x] + 1, s);
        int y = static_cast<int>(rng() % 5);
        v.add(y, 1, s);
        cv[y] = std::min(cv[y] + 1, s);
      }
      IntSet w = smultiset_union(u, v, s);
      for (int x = 0; x < 5; ++x) CHECK(w.count(x) == std::min(cu[x] + cv[x], s));
      CHECK(smultiset_union(v, u, s) == w);
      IntSet z = ms({static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)}, s);
      CHECK(smultiset_union(smultiset_union(u, v, s), z, s) == smultiset_union(u, smultiset_union(v, z, s), s));
      for (const auto& [x, n] : w.entries()) CHECK(n <= s);
    }
  }
}

TEST_CASE("env restriction and flags") {
  TyEnv e = env({bind(0, ProdSet::single(0)), bind(1, ProdSet::none())}, 1);
  TyEnv r = env_restrict(e, 0);
  CHECK(r.size() == 1);
  CHECK(r.count(bind(0, ProdSet::single(0))) == 1);
  CHECK(flag_of(ValueVec::zero()).empty());
  CHECK(flag_of(ValueVec::chi(ProdSet::single(0))) == ProdSet::single(0));
}

TEST_CASE("duplication factor examples") {
  EnvBinding x = bind(0, ProdSet::single(0));
  CHECK(dupl({env({x}, 1), env({x}, 1)}, 0, 1) == 1);
  CHECK(dupl({env({x}, 1), env({bind(1, ProdSet::single(0))}, 1)}, 0, 1) == 0);
  CHECK(dupl({env({x}, 1), env({x}, 1), env({x}, 1)}, 0, 1) == 2);
  // nonproductive bindings never count
  EnvBinding n = bind(0, ProdSet::none());
  CHECK(dupl({env({n}, 1), env({n}, 1)}, 0, 1) == 0);
  // with s = 2 the second copy is kept
  CHECK(dupl({env({x}, 2), env({x}, 2)}, 0, 2) == 0);
  CHECK(dupl({env({x}, 2), env({x}, 2), env({x}, 2)}, 0, 2) == 1);
}

TEST_CASE("duplication factor properties") {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    std::uint32_t s = 1 + rng() % 2;
    TyEnv e;
    for (int k = 0; k < 4; ++k) e.add(bind(rng() % 3, ProdSet{static_cast<std::uint32_t>(rng() % 4)}), 1, s);
    CHECK(dupl_vector({e}, 2, s).is_zero());
    // pairwise distinct productive bindings across envs
    std::vector<TyEnv> parts;
    for (std::uint32_t v = 0; v < 3; ++v) parts.push_back(env({bind(v, ProdSet{static_cast<std::uint32_t>(1 + rng() % 3)})}, s));
    CHECK(dupl_vector(parts, 2, s).is_zero());
  }
}

TEST_CASE("type enumeration counts") {
  TypeTable t;
  Sort o = Sort::base(), oo = Sort::arrow(o, o);
  CHECK(enumerate_types(o, 1, 1, t) == std::vector<TyId>{t.atom()});
  CHECK(enumerate_types(o, 2, 2, t) == std::vector<TyId>{t.atom()});
  CHECK(enumerate_types(oo, 1, 1, t).size() == 4);
  // two argument pairs, 0..2 copies each
  CHECK(enumerate_types(oo, 1, 2, t).size() == 9);
  auto second = enumerate_types(Sort::arrow(oo, o), 1, 1, t);
  CHECK(second.size() == 256);
  std::set<std::uint32_t> ids;
  for (TyId x : second) ids.insert(x.id);
  CHECK(ids.size() == second.size());
  for (std::size_t i = 1; i < second.size(); ++i) CHECK(t.compare(second[i - 1], second[i]) < 0);
}

TEST_CASE("s = 1 specialization matches the pr/np type space") {
  // T^(o->o) = P({pr, np} x {r}) -> r
  TypeTable t;
  auto all = enumerate_types(Sort::arrow(Sort::base(), Sort::base()), 1, 1, t);
  std::set<std::vector<TyPair>> argsets;
  for (TyId x : all) {
    for (TyPair p : t.args(x)) CHECK(t.is_atom(p.ty));
    auto a = t.args(x);
    CHECK(std::set<TyPair>(a.begin(), a.end()).size() == a.size());
    argsets.insert(a);
  }
  CHECK(argsets.size() == 4);
}

TEST_CASE("hash-consing and rendering") {
  TypeTable t;
  TyPair pr{ProdSet::single(0), t.atom()}, np{ProdSet::none(), t.atom()};
  TyId a = t.arrow({pr, np}, t.atom());
  TyId b = t.arrow({np, pr}, t.atom());
  CHECK(a == b);
  CHECK(t.arrow({pr}, t.atom()) != a);
  std::vector<std::string> letters{"a"};
  CHECK(t.render(t.arrow({pr}, t.atom()), letters) == "(pr:{a}, r) -> r");
  CHECK(t.render(t.top_arrow(t.atom()), letters) == "T -> r");
  CHECK(t.render(a, letters) == "(np, r) /\\ (pr:{a}, r) -> r");
}

TEST_CASE("concurrent interning is linearizable") {
  TypeTable t;
  std::vector<std::vector<TyId>> seen(4);
  std::vector<std::thread> threads;
  for (int k = 0; k < 4; ++k)
    threads.emplace_back([&, k] {
      for (std::uint32_t i = 0; i < 2000; ++i)
        seen[k].push_back(t.arrow({TyPair{ProdSet{i % 4}, t.atom()}}, i % 7 == 0 ? t.atom() : t.top_arrow(t.atom())));
    });
  for (auto& th : threads) th.join();
  for (int k = 1; k < 4; ++k) CHECK(seen[k] == seen[0]);
}

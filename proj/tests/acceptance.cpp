// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "structural_cases.hpp"
#include "support.hpp"
#include "worked_example.hpp"
#include "supsat/flow.hpp"
#include "supsat/oracle.hpp"
#include "supsat/structure.hpp"

using namespace supsat;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kOracleDepth = 200;
constexpr std::uint32_t kOracleThreshold = 5;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Result {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    else detail += "; " + why;
    ok = false;
  }
};

Saturation run(const Scheme& g, SaturationOptions o = {}, std::shared_ptr<TypeTable> t = nullptr) {
  return saturate(g, compute_flows(g), o, std::move(t));
}

Result worked_example() {
  auto t0 = Clock::now();
  std::vector<std::string> errors;
  testing::check_worked_example(errors);
  double s = seconds_since(t0);
  Result r;
  for (const auto& e : errors) r.fail(e);
  if (s >= 1.0) r.fail("took " + std::to_string(s) + " s");
  if (r.ok) r.detail = "values 1, 1, 2, 2 and 1 reproduced in " + std::to_string(s * 1000).substr(0, 5) + " ms";
  return r;
}

Result soundness(const std::vector<testing::CorpusEntry>& corpus) {
  Result r;
  auto t0 = Clock::now();
  std::set<unsigned> orders;
  std::size_t unsafe = 0, unbounded = 0;
  for (const auto& e : corpus) {
    orders.insert(e.scheme.order());
    if (!scheme_is_safe(e.scheme)) ++unsafe;
    Verdict v = decide(run(e.scheme));
    if (v.outcome != Outcome::Unbounded) continue;
    ++unbounded;
    OracleEvidence ev = oracle_unbounded_evidence(e.scheme, kOracleDepth, kOracleThreshold);
    if (!ev.confirmed) r.fail(e.name + " not confirmed (max f " + std::to_string(ev.max_f) + ")");
  }
  double s = seconds_since(t0);
  if (corpus.size() < 25) r.fail("only " + std::to_string(corpus.size()) + " schemes");
  for (unsigned o = 0; o <= 5; ++o)
    if (!orders.count(o)) r.fail("no scheme of order " + std::to_string(o));
  if (unsafe == 0) r.fail("no unsafe scheme");
  if (s >= 60) r.fail("corpus took " + std::to_string(s) + " s");
  if (r.ok)
    r.detail = std::to_string(unbounded) + " UNBOUNDED verdicts confirmed over " + std::to_string(corpus.size()) +
               " schemes (" + std::to_string(unsafe) + " unsafe) in " + std::to_string(s).substr(0, 5) + " s";
  return r;
}

Result safe_completeness(const std::vector<testing::CorpusEntry>& corpus) {
  Result r;
  std::size_t n = 0;
  for (const auto& e : corpus) {
    if (!scheme_is_safe(e.scheme)) continue;
    ++n;
    if (!e.expected) {
      r.fail(e.name + " has no ground truth");
      continue;
    }
    Verdict v = decide(run(e.scheme));
    if (v.outcome != *e.expected) r.fail(e.name + ": " + to_string(v.outcome) + " != " + to_string(*e.expected));
    // the labels themselves must agree with expansion
    OracleEvidence ev = oracle_unbounded_evidence(e.scheme, kOracleDepth, kOracleThreshold);
    if (ev.confirmed != (*e.expected == Outcome::Unbounded)) r.fail(e.name + ": ground truth disagrees with expansion");
  }
  if (n == 0) r.fail("empty safe sub-corpus");
  if (r.ok) r.detail = std::to_string(n) + " safe schemes match ground truth";
  return r;
}

std::set<std::pair<NonterminalId, std::uint64_t>> reachable(const Saturation& sat) {
  std::set<std::pair<NonterminalId, std::uint64_t>> out;
  for (std::uint32_t id : sat.reachable_from(sat.start_nodes()))
    out.insert({sat.nodes()[id].nonterminal, sat.nodes()[id].binding.packed()});
  return out;
}

Result flag_invariance(const std::vector<testing::CorpusEntry>& corpus) {
  Result r;
  for (const auto& e : corpus) {
    auto types = std::make_shared<TypeTable>();
    std::optional<Outcome> first;
    std::set<std::pair<NonterminalId, std::uint64_t>> first_set;
    for (const FlagCombo& c : flag_grid()) {
      SaturationOptions o;
      o.ftty = c.ftty;
      o.fntty = c.fntty;
      o.hvo = c.hvo;
      Saturation sat = run(e.scheme, o, types);
      Outcome v = decide(sat).outcome;
      if (!first) {
        first = v;
        first_set = reachable(sat);
      } else {
        if (v != *first) r.fail(e.name + " differs under " + c.label());
        if (reachable(sat) != first_set) r.fail(e.name + " bindings differ under " + c.label());
      }
    }
  }
  if (r.ok) r.detail = "8 combinations agree on " + std::to_string(corpus.size()) + " schemes";
  return r;
}

Result naive_equivalence(const std::vector<testing::CorpusEntry>& corpus) {
  Result r;
  std::size_t n = 0;
  for (const auto& e : corpus) {
    if (e.scheme.order() > 2) continue;
    ++n;
    auto types = std::make_shared<TypeTable>();
    Saturation sat = run(e.scheme, {}, types);
    NaiveResult naive = naive_saturate(e.scheme, {}, types);
    std::set<std::pair<NonterminalId, std::uint64_t>> ns;
    for (std::uint32_t id : naive.reachable_from(naive.start_nodes(e.scheme)))
      ns.insert({naive.nodes[id].nonterminal, naive.nodes[id].binding.packed()});
    if (ns != reachable(sat)) r.fail(e.name + " binding sets differ");
    GraphView view{naive.nodes.size(), naive.edges, naive.start, e.scheme.letter_count()};
    bool safe = scheme_is_safe(e.scheme);
    if (decide(view, safe).outcome != decide(sat).outcome) r.fail(e.name + " verdicts differ");
  }
  if (r.ok) r.detail = std::to_string(n) + " schemes of order <= 2 agree with full enumeration";
  return r;
}

// Engine verdict versus expansion: UNBOUNDED must be confirmed; BOUNDED must stay
// below the threshold within the depth budget.
bool consistent(const Scheme& g, Outcome v, std::string& why) {
  OracleEvidence ev = oracle_unbounded_evidence(g, kOracleDepth, kOracleThreshold);
  bool ok = (v == Outcome::Unbounded) == ev.confirmed;
  if (!ok) why = to_string(v) + " but expansion reached " + std::to_string(ev.max_f);
  return ok;
}

Result multi_letter(const std::vector<testing::CorpusEntry>& corpus) {
  Result r;
  std::size_t n = 0, mixed = 0, single_only = 0;
  for (const auto& e : corpus) {
    if (e.scheme.letter_count() != 2) continue;
    ++n;
    Outcome joint = decide(run(e.scheme)).outcome;
    std::string why;
    if (!consistent(e.scheme, joint, why)) r.fail(e.name + ": " + why);
    std::size_t unbounded_letters = 0;
    for (const std::string& letter : e.scheme.letter_names()) {
      Scheme one = e.scheme.with_important({letter});
      Outcome v = decide(run(one)).outcome;
      if (v == Outcome::Unbounded) ++unbounded_letters;
      if (!consistent(one, v, why)) r.fail(e.name + "/" + letter + ": " + why);
    }
    if (e.kind == "mixed") {
      ++mixed;
      if (joint != Outcome::Unbounded) r.fail(e.name + " should be unbounded in both letters");
    } else if (e.kind == "single-only") {
      ++single_only;
      if (joint != Outcome::Bounded || unbounded_letters == 0)
        r.fail(e.name + " should be unbounded only letter by letter");
    }
  }
  if (n < 5) r.fail("only " + std::to_string(n) + " two-letter schemes");
  if (mixed == 0 || single_only == 0) r.fail("both kinds of two-letter instances are needed");

  std::mt19937 rng(2);
  const std::uint32_t s = 2;
  for (int i = 0; i < 1000; ++i) {
    SMultiset<int> u, v;
    std::map<int, std::uint32_t> nu, nv;
    for (int k = 0; k < 4; ++k) {
      int x = static_cast<int>(rng() % 4), y = static_cast<int>(rng() % 4);
      u.add(x, 1, s);
      nu[x] = std::min(nu[x] + 1, s);
      v.add(y, 1, s);
      nv[y] = std::min(nv[y] + 1, s);
    }
    SMultiset<int> w = smultiset_union(u, v, s);
    for (int x = 0; x < 4; ++x)
      if (w.count(x) != std::min(nu[x] + nv[x], s)) {
        r.fail("union law broken");
        i = 1000;
        break;
      }
  }
  if (r.ok)
    r.detail = std::to_string(n) + " two-letter schemes (" + std::to_string(mixed) + " mixed, " +
               std::to_string(single_only) + " single-letter only); 1000 s=2 unions";
  return r;
}

Result witness_replay(const std::vector<testing::CorpusEntry>& corpus) {
  Result r;
  std::size_t n = 0;
  for (const auto& e : corpus) {
    Saturation sat = run(e.scheme);
    Verdict v = decide(sat);
    if (v.outcome != Outcome::Unbounded) continue;
    ++n;
    if (!v.witness) {
      r.fail(e.name + " has no witness");
      continue;
    }
    Replay rep = replay_witness(sat, *v.witness, 3);
    if (!rep.ok) r.fail(e.name + ": " + rep.error);
  }
  if (r.ok) r.detail = std::to_string(n) + " witnesses replayed 3 times";
  return r;
}

Result structural() {
  Result r;
  auto cases = testing::structural_cases();
  for (const auto& c : cases) {
    if (is_superficially_safe(c.term) != c.superficially_safe) r.fail(c.label + ": superficial safety");
    if (is_safe(c.term) != c.safe) r.fail(c.label + ": safety");
    if (is_homogeneous(c.term) != c.homogeneous) r.fail(c.label + ": homogeneity");
  }
  if (cases.size() != 12) r.fail(std::to_string(cases.size()) + " cases instead of 12");
  if (r.ok) r.detail = "12 hand-labeled terms";
  return r;
}

}  // namespace

int main() {
  std::vector<testing::CorpusEntry> corpus;
  try {
    corpus = testing::load_corpus();
  } catch (const std::exception& e) {
    std::printf("FAIL corpus could not be loaded: %s\n", e.what());
    return 1;
  }
  struct Criterion {
    const char* name;
    std::function<Result()> check;
  };
  std::vector<Criterion> criteria = {
      {"worked-example regression", worked_example},
      {"soundness against expansion", [&] { return soundness(corpus); }},
      {"safe completeness", [&] { return safe_completeness(corpus); }},
      {"flag invariance", [&] { return flag_invariance(corpus); }},
      {"naive saturation equivalence", [&] { return naive_equivalence(corpus); }},
      {"multi-letter instances", [&] { return multi_letter(corpus); }},
      {"witness replay", [&] { return witness_replay(corpus); }},
      {"structural checks", structural},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result res;
    try {
      res = criteria[i].check();
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s\n", res.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, res.detail.c_str());
    std::fflush(stdout);
    if (!res.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

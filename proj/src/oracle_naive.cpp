#include <algorithm>
#include <map>

#include "supsat/error.hpp"
#include "supsat/oracle.hpp"
#include "supsat/typing.hpp"

namespace supsat {

std::optional<std::uint32_t> NaiveResult::find(NonterminalId x, TyPair b) const {
  for (std::uint32_t id = 0; id < nodes.size(); ++id)
    if (nodes[id].nonterminal == x && nodes[id].binding == b) return id;
  return std::nullopt;
}

std::set<std::uint32_t> NaiveResult::reachable_from(const std::vector<std::uint32_t>& roots) const {
  std::set<std::uint32_t> seen(roots.begin(), roots.end());
  std::vector<std::uint32_t> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    for (const GraphEdge& e : edges)
      if (e.from == n && seen.insert(e.to).second) stack.push_back(e.to);
  }
  return seen;
}

std::vector<std::uint32_t> NaiveResult::start_nodes(const Scheme& g) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t id = 0; id < nodes.size(); ++id)
    if (nodes[id].nonterminal == g.start()) out.push_back(id);
  return out;
}

namespace {

struct NJ {
  Judgment j;
  AssumptionSet assumptions;
};

class Naive {
 public:
  Naive(const Scheme& g, const NaiveOptions& opts, std::shared_ptr<TypeTable> types)
      : g_(g),
        opts_(opts),
        types_(types ? std::move(types) : std::make_shared<TypeTable>()),
        s_(static_cast<std::uint32_t>(g.multiplicity_cap())),
        letters_(g.letter_count()),
        deadline_(std::chrono::steady_clock::now() + opts.timeout),
        table_(g.rules().size()) {}

  NaiveResult run() {
    NaiveResult out;
    out.types = types_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, ProdSet> edges;
    while (true) {
      ++out.rounds;
      std::vector<std::vector<NJ>> closed(g_.rules().size());
      bool grew = false;
      for (NonterminalId x = 0; x < g_.rules().size(); ++x) closed[x] = type_rule(x);
      for (NonterminalId x = 0; x < g_.rules().size(); ++x)
        for (const NJ& c : closed[x]) {
          TyPair b{flag_of(c.j.value), c.j.ty};
          if (!index_.count({x, b.packed()})) {
            index_[{x, b.packed()}] = static_cast<std::uint32_t>(out.nodes.size());
            out.nodes.push_back(BindingNode{x, b});
            table_[x].push_back(TableEntry{index_[{x, b.packed()}], b});
            grew = true;
          }
        }
      if (grew) continue;
      // Fixpoint reached: this round's derivations are over the final table.
      for (NonterminalId x = 0; x < g_.rules().size(); ++x)
        for (const NJ& c : closed[x]) {
          std::uint32_t from = index_.at({x, TyPair{flag_of(c.j.value), c.j.ty}.packed()});
          for (auto [y, count] : c.assumptions) {
            ProdSet mask;
            ProdSet price = out.nodes[y].binding.set;
            for (std::size_t a = 0; a < letters_; ++a)
              if (c.j.value[a] > (price.contains(a) ? 1u : 0u)) mask |= ProdSet::single(a);
            edges[{from, y}] |= mask;
          }
        }
      break;
    }
    for (const auto& [k, mask] : edges) out.edges.push_back(GraphEdge{k.first, k.second, mask});
    out.start = out.find(g_.start(), TyPair{ProdSet::all(letters_), types_->atom()});
    return out;
  }

 private:
  void tick() {
    if (++work_ > opts_.max_judgments)
      throw ResourceExceeded(ResourceExceeded::Kind::Memory, "naive saturation exceeded its judgment cap");
    if ((work_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw ResourceExceeded(ResourceExceeded::Kind::Timeout, "naive saturation timed out");
  }

  const std::vector<TyId>& types_of(const Sort& sort) {
    std::string key = sort.to_string();
    auto it = sort_types_.find(key);
    if (it != sort_types_.end()) return it->second;
    return sort_types_.emplace(key, enumerate_types(sort, letters_, s_, *types_, opts_.max_types_per_sort))
        .first->second;
  }

  std::vector<NJ> collapse(std::vector<NJ> in) {
    // Maximal values per (type, env, assumptions, flag).
    std::map<std::tuple<std::uint32_t, TyEnv, AssumptionSet, std::uint32_t>, std::vector<NJ>> groups;
    for (NJ& n : in) {
      auto& group = groups[{n.j.ty.id, n.j.env, n.assumptions, flag_of(n.j.value).bits}];
      bool dominated = false;
      for (const NJ& o : group) dominated = dominated || o.j.value.dominates(n.j.value);
      if (dominated) continue;
      std::erase_if(group, [&](const NJ& o) { return n.j.value.dominates(o.j.value); });
      group.push_back(std::move(n));
    }
    std::vector<NJ> out;
    for (auto& [k, group] : groups)
      for (NJ& n : group) out.push_back(std::move(n));
    return out;
  }

  std::vector<NJ> judge(const Term& t, const Rule& rule) {
    std::vector<NJ> out;
    switch (t.kind()) {
      case Term::Kind::Constant: {
        TerminalId c = *g_.find_terminal(t.name());
        if (t.arity() == 0) {
          if (auto j = type_constant(g_, c, std::nullopt, ProdSet{}, *types_)) out.push_back({*j, {}});
          break;
        }
        for (std::size_t child = 0; child < t.arity(); ++child)
          for (std::uint32_t bits = 0; bits < (1u << letters_); ++bits)
            if (auto j = type_constant(g_, c, child, ProdSet{bits}, *types_)) out.push_back({*j, {}});
        break;
      }
      case Term::Kind::Variable: {
        auto pos = std::find(rule.param_names.begin(), rule.param_names.end(), t.name()) - rule.param_names.begin();
        for (TyId ty : types_of(t.sort()))
          for (std::uint32_t bits = 0; bits < (1u << letters_); ++bits) {
            tick();
            out.push_back({type_variable(static_cast<std::uint32_t>(pos), TyPair{ProdSet{bits}, ty}), {}});
          }
        break;
      }
      case Term::Kind::Nonterminal: {
        NonterminalId y = *g_.find_nonterminal(t.name());
        for (const TableEntry& e : table_[y]) out.push_back({type_assumption(e.binding), {{e.id, 1}}});
        break;
      }
      case Term::Kind::Application: {
        std::vector<NJ> funs = judge(t.fun(), rule);
        std::vector<NJ> args = judge(t.arg(), rule);
        for (const NJ& f : funs) {
          const std::vector<TyPair>& required = types_->args(f.j.ty);
          // Choose, for each required copy, one argument judgment with that pair.
          std::vector<std::vector<const NJ*>> choices{{}};
          for (std::size_t k = 0; k < required.size() && !choices.empty();) {
            std::size_t c = 1;
            while (k + c < required.size() && required[k + c] == required[k]) ++c;
            std::vector<const NJ*> options;
            for (const NJ& a : args)
              if (a.j.pair() == required[k]) options.push_back(&a);
            k += c;
            std::vector<std::vector<const NJ*>> next;
            std::vector<std::size_t> pick(c, 0);
            if (!options.empty())
              while (true) {
                for (const auto& ch : choices) {
                  tick();
                  auto extended = ch;
                  for (std::size_t idx : pick) extended.push_back(options[idx]);
                  next.push_back(std::move(extended));
                }
                std::size_t pos = c;
                while (pos > 0 && pick[pos - 1] + 1 == options.size()) --pos;
                if (pos == 0) break;
                ++pick[pos - 1];
                for (std::size_t q = pos; q < c; ++q) pick[q] = pick[pos - 1];
              }
            choices = std::move(next);
          }
          for (const auto& ch : choices) {
            std::vector<Judgment> js;
            std::map<std::uint32_t, std::uint32_t> uses;
            for (auto [id, n] : f.assumptions) uses[id] += n;
            for (const NJ* a : ch) {
              js.push_back(a->j);
              for (auto [id, n] : a->assumptions) uses[id] += n;
            }
            auto merged = merge_application(f.j, js, s_, letters_, *types_);
            if (!merged) continue;
            out.push_back({std::move(*merged), AssumptionSet(uses.begin(), uses.end())});
          }
        }
        break;
      }
      case Term::Kind::Abstraction:
        break;
    }
    return collapse(std::move(out));
  }

  std::vector<NJ> type_rule(NonterminalId x) {
    const Rule& rule = g_.rule(x);
    std::vector<NJ> out;
    for (NJ& n : judge(rule.body, rule)) {
      Judgment j = n.j;
      for (std::size_t i = rule.param_count(); i-- > 0;) j = abstract(j, static_cast<std::uint32_t>(i), *types_);
      out.push_back({std::move(j), std::move(n.assumptions)});
    }
    return collapse(std::move(out));
  }

  const Scheme& g_;
  NaiveOptions opts_;
  std::shared_ptr<TypeTable> types_;
  std::uint32_t s_;
  std::size_t letters_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::vector<TableEntry>> table_;
  std::map<std::pair<NonterminalId, std::uint64_t>, std::uint32_t> index_;
  std::map<std::string, std::vector<TyId>> sort_types_;
  std::size_t work_ = 0;
};

}  // namespace

NaiveResult naive_saturate(const Scheme& g, const NaiveOptions& opts, std::shared_ptr<TypeTable> types) {
  return Naive(g, opts, std::move(types)).run();
}

}  // namespace supsat

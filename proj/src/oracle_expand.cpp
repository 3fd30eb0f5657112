#include "supsat/oracle.hpp"

#include <algorithm>
#include <unordered_map>

namespace supsat {

namespace {

// Hash-consed applicative terms over terminals and nonterminals.
class TermStore {
 public:
  enum Kind : std::uint64_t { Terminal = 0, Nonterminal = 1, App = 2 };

  std::uint32_t terminal(TerminalId t) { return intern(Terminal, t, 0); }
  std::uint32_t nonterminal(NonterminalId x) { return intern(Nonterminal, x, 0); }
  std::uint32_t app(std::uint32_t f, std::uint32_t a) { return intern(App, f, a); }

  Kind kind(std::uint32_t t) const { return nodes_[t].kind; }
  std::uint32_t a(std::uint32_t t) const { return nodes_[t].a; }
  std::uint32_t b(std::uint32_t t) const { return nodes_[t].b; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Kind kind;
    std::uint32_t a, b;
  };

  std::uint32_t intern(Kind k, std::uint32_t a, std::uint32_t b) {
    std::uint64_t key = (static_cast<std::uint64_t>(k) << 62) | (std::uint64_t{a} << 31) | b;
    auto [it, inserted] = index_.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back(Node{k, a, b});
    return it->second;
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

struct HeadNormal {
  TerminalId head;
  std::vector<std::uint32_t> args;
};

class Expander {
 public:
  Expander(const Scheme& g, std::size_t budget) : g_(g), budget_(budget) {}

  std::uint32_t start() { return store_.nonterminal(g_.start()); }
  std::size_t terms() const { return store_.size(); }

  // Head normal form by rule unfolding; nullopt for omega or an exhausted budget.
  const std::optional<HeadNormal>& normalize(std::uint32_t t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    std::optional<HeadNormal> result;
    std::uint32_t cur = t;
    for (std::size_t step = 0;; ++step) {
      std::vector<std::uint32_t> args;
      std::uint32_t head = cur;
      while (store_.kind(head) == TermStore::App) {
        args.push_back(store_.b(head));
        head = store_.a(head);
      }
      std::reverse(args.begin(), args.end());
      if (store_.kind(head) == TermStore::Terminal) {
        TerminalId a = store_.a(head);
        if (a != g_.omega()) result = HeadNormal{a, std::move(args)};
        break;
      }
      if (step >= budget_) break;
      const Rule& rule = g_.rule(store_.a(head));
      std::size_t k = rule.param_count();
      std::uint32_t next = instantiate(rule, rule.root, args);
      for (std::size_t i = k; i < args.size(); ++i) next = store_.app(next, args[i]);
      cur = next;
    }
    return memo_.emplace(t, std::move(result)).first->second;
  }

  ApproxTree tree(std::uint32_t t, std::size_t depth) {
    if (depth == 0) return ApproxTree{g_.omega(), {}};
    const auto& hn = normalize(t);
    if (!hn) return ApproxTree{g_.omega(), {}};
    ApproxTree out{hn->head, {}};
    std::vector<std::uint32_t> args = hn->args;
    for (std::uint32_t a : args) out.children.push_back(tree(a, depth - 1));
    return out;
  }

  // Pareto-maximal letter-count vectors (capped) over finite branches within `depth` levels.
  const std::vector<ValueVec>& branches(std::uint32_t t, std::size_t depth, std::uint32_t cap) {
    std::uint64_t key = (std::uint64_t{t} << 16) | depth;
    auto it = branch_memo_.find(key);
    if (it != branch_memo_.end()) return it->second;
    std::vector<ValueVec> out;
    if (depth > 0) {
      std::optional<HeadNormal> hn = normalize(t);
      if (hn) {
        ValueVec self;
        if (auto letter = g_.letter_of(hn->head)) self[*letter] = 1;
        if (hn->args.empty()) {
          out.push_back(capped(self, cap));
        } else {
          for (std::uint32_t child : hn->args) {
            std::vector<ValueVec> sub = branches(child, depth - 1, cap);
            for (const ValueVec& v : sub) out.push_back(capped(v + self, cap));
          }
          out = pareto(std::move(out));
        }
      }
    }
    return branch_memo_.emplace(key, std::move(out)).first->second;
  }

  static std::vector<ValueVec> pareto(std::vector<ValueVec> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::vector<ValueVec> out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < vs.size() && !dominated; ++j)
        dominated = j != i && vs[j].dominates(vs[i]);
      if (!dominated) out.push_back(vs[i]);
    }
    return out;
  }

 private:
  static ValueVec capped(ValueVec v, std::uint32_t cap) {
    for (std::size_t i = 0; i < kMaxLetters; ++i) v[i] = std::min(v[i], cap);
    return v;
  }

  std::uint32_t instantiate(const Rule& rule, std::uint32_t n, const std::vector<std::uint32_t>& args) {
    const SpineNode& node = rule.nodes[n];
    std::uint32_t t = 0;
    switch (node.head_kind) {
      case SpineNode::Head::Terminal:
        t = store_.terminal(node.head);
        break;
      case SpineNode::Head::Nonterminal:
        t = store_.nonterminal(node.head);
        break;
      case SpineNode::Head::Param:
        t = args[node.head];
        break;
    }
    for (std::uint32_t a : node.args) t = store_.app(t, instantiate(rule, a, args));
    return t;
  }

  const Scheme& g_;
  std::size_t budget_;
  TermStore store_;
  std::unordered_map<std::uint32_t, std::optional<HeadNormal>> memo_;
  std::unordered_map<std::uint64_t, std::vector<ValueVec>> branch_memo_;
};

std::optional<std::uint32_t> best_min(const std::vector<ValueVec>& vs, std::size_t letters) {
  std::optional<std::uint32_t> best;
  for (const ValueVec& v : vs) {
    std::uint32_t m = ~0u;
    for (std::size_t a = 0; a < letters; ++a) m = std::min(m, v[a]);
    if (letters == 0) m = 0;
    if (!best || m > *best) best = m;
  }
  return best;
}

}  // namespace

std::string ApproxTree::to_string(const Scheme& g) const {
  std::string out = g.terminals()[label].name;
  if (children.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += ", ";
    out += children[i].to_string(g);
  }
  return out + ")";
}

ApproxTree expand_tree(const Scheme& g, std::size_t depth, std::size_t step_budget) {
  Expander e(g, step_budget);
  return e.tree(e.start(), depth);
}

ApproxTree truncate_tree(const ApproxTree& t, std::size_t depth, TerminalId omega) {
  if (depth == 0) return ApproxTree{omega, {}};
  ApproxTree out{t.label, {}};
  for (const ApproxTree& c : t.children) out.children.push_back(truncate_tree(c, depth - 1, omega));
  return out;
}

namespace {

std::vector<ValueVec> tree_branches(const ApproxTree& t, const Scheme& g) {
  if (t.label == g.omega()) return {};
  ValueVec self;
  if (auto letter = g.letter_of(t.label)) self[*letter] = 1;
  if (t.children.empty()) return {self};
  std::vector<ValueVec> out;
  for (const ApproxTree& c : t.children)
    for (const ValueVec& v : tree_branches(c, g)) out.push_back(v + self);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

BranchProfile branch_profile(const ApproxTree& t, const Scheme& g, std::size_t depth) {
  BranchProfile p;
  p.depth = depth;
  p.f = best_min(tree_branches(t, g), g.letter_count());
  return p;
}

OracleEvidence oracle_unbounded_evidence(const Scheme& g, std::size_t depth_budget, std::uint32_t threshold,
                                         std::size_t term_budget) {
  OracleEvidence ev;
  Expander e(g, kHeadStepBudget);
  std::uint32_t start = e.start();
  for (std::size_t d = 1; d <= depth_budget; ++d) {
    auto f = best_min(e.branches(start, d, threshold), g.letter_count());
    ev.profile.push_back(f);
    ev.depth = d;
    if (f) {
      ev.any_branch = true;
      ev.max_f = std::max(ev.max_f, *f);
    }
    if (ev.max_f >= threshold) {
      ev.confirmed = true;
      break;
    }
    if (e.terms() > term_budget) {
      ev.exhausted = true;
      break;
    }
  }
  return ev;
}

}  // namespace supsat

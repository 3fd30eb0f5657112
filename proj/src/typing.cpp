#include "supsat/typing.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "supsat/error.hpp"

namespace supsat {

// ---------------------------------------------------------------------------
// Literal rules

std::optional<Judgment> type_constant(const Scheme& g, TerminalId t, std::optional<std::size_t> child,
                                      ProdSet child_set, TypeTable& types) {
  if (t == g.omega()) return std::nullopt;
  const TerminalDecl& decl = g.terminals()[t];
  Judgment j;
  if (auto letter = g.letter_of(t)) j.value = ValueVec::chi(ProdSet::single(*letter));
  if (decl.arity == 0) {
    j.ty = types.atom();
    return j;
  }
  if (!child || *child >= decl.arity) return std::nullopt;
  TyId ty = types.atom();
  for (std::size_t i = decl.arity; i-- > 0;) {
    if (i == *child)
      ty = types.arrow({TyPair{child_set, types.atom()}}, ty);
    else
      ty = types.arrow({}, ty);
  }
  j.ty = ty;
  return j;
}

Judgment type_variable(std::uint32_t var, TyPair pair) {
  Judgment j;
  j.env.add(EnvBinding{var, pair}, 1, 1);
  j.ty = pair.ty;
  return j;
}

Judgment type_assumption(TyPair binding) {
  Judgment j;
  j.value = ValueVec::chi(binding.set);
  j.ty = binding.ty;
  return j;
}

std::optional<Judgment> merge_application(const Judgment& fun, const std::vector<Judgment>& args, std::uint32_t s,
                                          std::size_t letters, TypeTable& types) {
  if (types.is_atom(fun.ty)) return std::nullopt;
  std::vector<TyPair> required = types.args(fun.ty);
  std::vector<TyPair> given;
  for (const Judgment& a : args) given.push_back(a.pair());
  std::sort(required.begin(), required.end());
  std::sort(given.begin(), given.end());
  if (required != given) return std::nullopt;

  std::vector<TyEnv> envs{fun.env};
  Judgment out;
  out.env = fun.env;
  out.value = fun.value;
  for (const Judgment& a : args) {
    envs.push_back(a.env);
    out.env = smultiset_union(out.env, a.env, s);
    out.value += a.value;
  }
  out.value += dupl_vector(envs, letters, s);
  out.ty = types.result(fun.ty);
  return out;
}

Judgment abstract(const Judgment& body, std::uint32_t var, TypeTable& types) {
  std::vector<TyPair> pairs;
  for (const auto& [b, n] : body.env.entries())
    if (b.var == var) pairs.insert(pairs.end(), n, b.pair);
  Judgment out;
  out.env = body.env.filter([var](const EnvBinding& b) { return b.var != var; });
  out.value = body.value;
  out.ty = types.arrow(std::move(pairs), body.ty);
  return out;
}

// ---------------------------------------------------------------------------
// Top-down engine

namespace {

struct Partial {
  TyEnv env;
  AssumptionSet assumptions;
  ValueVec value;
  bool forced = false;
  std::shared_ptr<const DerivNode> deriv;

  ProdSet letters() const { return flag_of(value) | env_letters(env); }
};

struct Typed {
  TyId ty;
  Partial p;
};

// Partial being extended argument by argument.
struct Acc {
  Partial p;
  std::vector<DerivNode::Arg> args;
};

using Key = std::vector<std::uint64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = k.size();
    for (auto x : k) h = (h ^ x) * 0x9e3779b97f4a7c15ull + (h >> 29);
    return h;
  }
};

Key make_key(TyId ty, const Partial& p) {
  Key k;
  k.reserve(3 + 2 * p.env.distinct() + p.assumptions.size());
  k.push_back(ty.id);
  k.push_back((std::uint64_t{flag_of(p.value).bits} << 1) | (p.forced ? 1 : 0));
  for (const auto& [b, n] : p.env.entries()) {
    k.push_back((std::uint64_t{b.var} << 40) | (std::uint64_t{n} << 32) | b.pair.set.bits);
    k.push_back(b.pair.ty.id);
  }
  k.push_back(~std::uint64_t{0});
  for (auto [id, c] : p.assumptions) k.push_back((std::uint64_t{id} << 32) | c);
  return k;
}

// Keeps, per key, an antichain of maximal values.
template <class T>
class Collapser {
 public:
  template <class GetPartial>
  void add(Key key, T item, GetPartial get) {
    auto& bucket = index_[std::move(key)];
    const ValueVec& v = get(item).value;
    for (std::size_t idx : bucket)
      if (items_[idx] && get(*items_[idx]).value.dominates(v)) return;
    std::vector<std::size_t> kept;
    for (std::size_t idx : bucket) {
      if (items_[idx] && v.dominates(get(*items_[idx]).value))
        items_[idx].reset();
      else
        kept.push_back(idx);
    }
    kept.push_back(items_.size());
    bucket = std::move(kept);
    items_.push_back(std::move(item));
  }

  std::vector<T> take() {
    std::vector<T> out;
    out.reserve(items_.size());
    for (auto& it : items_)
      if (it) out.push_back(std::move(*it));
    items_.clear();
    index_.clear();
    return out;
  }

 private:
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> index_;
  std::vector<std::optional<T>> items_;
};

void merge_assumptions(AssumptionSet& into, const AssumptionSet& from) {
  if (from.empty()) return;
  AssumptionSet out;
  out.reserve(into.size() + from.size());
  std::size_t i = 0, j = 0;
  while (i < into.size() || j < from.size()) {
    if (j == from.size() || (i < into.size() && into[i].first < from[j].first)) {
      out.push_back(into[i++]);
    } else if (i == into.size() || from[j].first < into[i].first) {
      out.push_back(from[j++]);
    } else {
      out.push_back({into[i].first, into[i].second + from[j].second});
      ++i;
      ++j;
    }
  }
  into = std::move(out);
}

// Adds `from` into `into`. Copies of a binding beyond the cap s are exactly the
// duplications counted by the (@) rule; summed over a derivation tree the per-node
// duplication factors telescope to these losses.
void absorb(Partial& into, const Partial& from, std::uint32_t s) {
  for (const auto& [b, m] : from.env.entries()) {
    std::uint32_t n = into.env.count(b);
    into.env.add(b, m, s);
    std::uint32_t lost = n + m - into.env.count(b);
    if (lost) into.value.add_scaled(b.pair.set, lost);
  }
  into.value += from.value;
  merge_assumptions(into.assumptions, from.assumptions);
  into.forced = into.forced || from.forced;
}

class Engine {
 public:
  Engine(const TypingInput& in, const TypingOptions& opts)
      : in_(in),
        opts_(opts),
        g_(in.scheme),
        rule_(in.scheme.rule(in.rule)),
        types_(in.types),
        s_(static_cast<std::uint32_t>(in.scheme.multiplicity_cap())),
        letters_(in.scheme.letter_count()),
        synth_memo_(rule_.nodes.size()) {}

  const Rule& rule() const { return rule_; }

  const std::vector<Typed>& synth(std::uint32_t n) {
    if (!synth_memo_[n]) synth_memo_[n] = compute_synth(n);
    return *synth_memo_[n];
  }

  // Derivations of node n at type ty whose letters are exactly `set`.
  const std::vector<Partial>& check(std::uint32_t n, TyId ty, ProdSet set) {
    auto key = std::make_tuple(n, ty.id, set.bits);
    auto it = check_memo_.find(key);
    if (it != check_memo_.end()) return it->second;
    std::vector<Partial> out;
    const SpineNode& node = rule_.nodes[n];
    if (opts_.open_params && node.head_kind == SpineNode::Head::Param && node.args.empty()) {
      out.push_back(param_leaf(n, node.head, TyPair{set, ty}));
    } else {
      for (const Typed& t : synth(n))
        if (t.ty == ty && t.p.letters() == set) out.push_back(t.p);
    }
    return check_memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  void tick() {
    if (++steps_ > opts_.max_partials)
      throw ResourceExceeded(ResourceExceeded::Kind::Memory, "typing of a rule body exceeded the partial cap");
    if ((steps_ & 1023) == 0 && opts_.deadline && std::chrono::steady_clock::now() > *opts_.deadline)
      throw ResourceExceeded(ResourceExceeded::Kind::Timeout, "timeout");
  }

  template <class V>
  auto ordered(const V& v) const {
    std::vector<typename V::value_type> out(v.begin(), v.end());
    if (opts_.reverse) std::reverse(out.begin(), out.end());
    return out;
  }

  Partial param_leaf(std::uint32_t n, std::uint32_t var, TyPair pair) {
    Partial p;
    p.env.add(EnvBinding{var, pair}, 1, s_);
    p.forced = opts_.forced_param && opts_.forced_param->first == var && opts_.forced_param->second == pair;
    if (opts_.keep_derivations) {
      auto d = std::make_shared<DerivNode>();
      d->node = n;
      d->kind = DerivNode::Kind::Param;
      d->head_pair = pair;
      d->head_type = pair.ty;
      d->ty = pair.ty;
      d->env = p.env;
      p.deriv = std::move(d);
    }
    return p;
  }

  std::shared_ptr<const DerivNode> finish_deriv(std::uint32_t n, DerivNode head, TyId ty, const Partial& p,
                                                std::vector<DerivNode::Arg> args) {
    head.node = n;
    head.ty = ty;
    head.value = p.value;
    head.env = p.env;
    head.args = std::move(args);
    return std::make_shared<DerivNode>(std::move(head));
  }

  // Applies head type `head_ty` (with base partial `base`) to the arguments of node n.
  void apply_head(std::uint32_t n, TyId head_ty, const Partial& base, const DerivNode& head,
                  Collapser<Typed>& out) {
    const SpineNode& node = rule_.nodes[n];
    std::vector<const std::vector<TyPair>*> arg_sets;
    TyId result;
    if (!types_.peel(head_ty, node.args.size(), arg_sets, result)) return;

    std::vector<Acc> accs{Acc{base, {}}};
    for (std::size_t j = 0; j < node.args.size() && !accs.empty(); ++j) {
      const std::vector<TyPair>& req = *arg_sets[j];
      for (std::size_t k = 0; k < req.size() && !accs.empty();) {
        std::size_t c = 1;
        while (k + c < req.size() && req[k + c] == req[k]) ++c;
        TyPair pair = req[k];
        k += c;
        const std::vector<Partial>& options = check(node.args[j], pair.ty, pair.set);
        if (options.empty()) {
          accs.clear();
          break;
        }
        // Every multiset of c derivations among the options.
        std::vector<std::size_t> pick(c, 0);
        Collapser<Acc> next;
        while (true) {
          for (const Acc& a : accs) {
            tick();
            Acc b = a;
            for (std::size_t idx : pick) {
              absorb(b.p, options[idx], s_);
              if (opts_.keep_derivations)
                b.args.push_back(DerivNode::Arg{static_cast<std::uint32_t>(j), pair, options[idx].deriv});
            }
            Key key = make_key(TyId{0}, b.p);
            next.add(std::move(key), std::move(b), [](const Acc& x) -> const Partial& { return x.p; });
          }
          std::size_t pos = c;
          while (pos > 0 && pick[pos - 1] + 1 == options.size()) --pos;
          if (pos == 0) break;
          ++pick[pos - 1];
          for (std::size_t q = pos; q < c; ++q) pick[q] = pick[pos - 1];
        }
        accs = next.take();
      }
    }
    for (Acc& a : accs) {
      Typed t{result, std::move(a.p)};
      if (opts_.keep_derivations) {
        DerivNode h = head;
        h.head_type = head_ty;
        t.p.deriv = finish_deriv(n, std::move(h), result, t.p, std::move(a.args));
      }
      Key key = make_key(t.ty, t.p);
      out.add(std::move(key), std::move(t), [](const Typed& x) -> const Partial& { return x.p; });
    }
  }

  std::vector<Typed> compute_synth(std::uint32_t n) {
    const SpineNode& node = rule_.nodes[n];
    Collapser<Typed> out;
    auto get = [](const Typed& x) -> const Partial& { return x.p; };
    switch (node.head_kind) {
      case SpineNode::Head::Terminal:
        synth_terminal(n, out);
        break;
      case SpineNode::Head::Param: {
        std::uint32_t var = node.head;
        if (node.args.empty()) {
          if (opts_.open_params) {
            // A bare parameter synthesized without demand: only the base sort arises here.
            if (node.sort.is_base())
              for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << letters_); ++bits) {
                Typed t{types_.atom(), param_leaf(n, var, TyPair{ProdSet{bits}, types_.atom()})};
                Key key = make_key(t.ty, t.p);
                out.add(std::move(key), std::move(t), get);
              }
          } else {
            for (TyPair pair : ordered(in_.candidates[var])) {
              tick();
              Typed t{pair.ty, param_leaf(n, var, pair)};
              Key key = make_key(t.ty, t.p);
              out.add(std::move(key), std::move(t), get);
            }
          }
          break;
        }
        for (TyPair pair : ordered(in_.candidates[var])) {
          Partial base = param_leaf(n, var, pair);
          DerivNode head;
          head.kind = DerivNode::Kind::Param;
          head.head_pair = pair;
          apply_head(n, pair.ty, base, head, out);
        }
        break;
      }
      case SpineNode::Head::Nonterminal: {
        for (const TableEntry& e : ordered(in_.table[node.head])) {
          Partial base;
          base.value = ValueVec::chi(e.binding.set);
          base.assumptions.push_back({e.id, 1});
          base.forced = opts_.forced_binding && *opts_.forced_binding == e.id;
          DerivNode head;
          head.kind = DerivNode::Kind::Nonterminal;
          head.binding = e.id;
          apply_head(n, e.binding.ty, base, head, out);
        }
        break;
      }
    }
    return out.take();
  }

  void synth_terminal(std::uint32_t n, Collapser<Typed>& out) {
    const SpineNode& node = rule_.nodes[n];
    TerminalId t = node.head;
    if (t == g_.omega()) return;
    const TerminalDecl& decl = g_.terminals()[t];
    auto get = [](const Typed& x) -> const Partial& { return x.p; };
    Partial base;
    if (auto letter = g_.letter_of(t)) base.value = ValueVec::chi(ProdSet::single(*letter));
    std::size_t m = node.args.size();

    auto emit = [&](std::optional<std::uint32_t> child, ProdSet child_set, Partial p,
                    std::vector<DerivNode::Arg> args) {
      auto head = type_constant(g_, t, child, child_set, types_);
      std::vector<const std::vector<TyPair>*> unused;
      TyId result;
      types_.peel(head->ty, m, unused, result);
      Typed typed{result, std::move(p)};
      if (opts_.keep_derivations) {
        DerivNode h;
        h.kind = DerivNode::Kind::Terminal;
        h.child = child;
        h.head_type = head->ty;
        typed.p.deriv = finish_deriv(n, std::move(h), result, typed.p, std::move(args));
      }
      Key key = make_key(typed.ty, typed.p);
      out.add(std::move(key), std::move(typed), get);
    };

    if (decl.arity == 0) {
      emit(std::nullopt, ProdSet{}, base, {});
      return;
    }
    for (std::uint32_t c = 0; c < decl.arity; ++c) {
      if (c < m) {
        for (const Typed& child : synth(node.args[c])) {
          tick();
          Partial p = base;
          absorb(p, child.p, s_);
          std::vector<DerivNode::Arg> args;
          ProdSet set = child.p.letters();
          if (opts_.keep_derivations) args.push_back(DerivNode::Arg{c, TyPair{set, child.ty}, child.p.deriv});
          emit(c, set, std::move(p), std::move(args));
        }
      } else {
        for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << letters_); ++bits) emit(c, ProdSet{bits}, base, {});
      }
    }
  }

  const TypingInput& in_;
  const TypingOptions& opts_;
  const Scheme& g_;
  const Rule& rule_;
  TypeTable& types_;
  std::uint32_t s_;
  std::size_t letters_;
  std::vector<std::optional<std::vector<Typed>>> synth_memo_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::vector<Partial>> check_memo_;
  std::size_t steps_ = 0;
};

bool passes_forcing(const Partial& p, const TypingOptions& opts) {
  return (!opts.forced_binding && !opts.forced_param) || p.forced;
}

RuleRecord close_record(const Rule& rule, const Typed& t, TypeTable& types) {
  TyId ty = t.ty;
  for (std::size_t i = rule.param_count(); i-- > 0;) {
    std::vector<TyPair> pairs;
    for (const auto& [b, n] : t.p.env.entries())
      if (b.var == i) pairs.insert(pairs.end(), n, b.pair);
    ty = types.arrow(std::move(pairs), ty);
  }
  return RuleRecord{ty, t.p.value, t.p.assumptions, t.p.deriv};
}

std::vector<RuleRecord> canonical_records(std::vector<RuleRecord> records, const TypeTable& types) {
  // Collapse equal (type, flag, assumptions) to maximal values. The sort puts equal
  // keys next to each other, ordered by value.
  std::sort(records.begin(), records.end(),
            [&](const RuleRecord& a, const RuleRecord& b) { return record_less(a, b, types); });
  std::vector<RuleRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i + 1;
    while (j < records.size() && records[j].ty == records[i].ty && records[j].set() == records[i].set() &&
           records[j].assumptions == records[i].assumptions)
      ++j;
    std::size_t first = out.size();
    for (std::size_t k = j; k-- > i;) {
      bool dominated = false;
      for (std::size_t m = first; m < out.size() && !dominated; ++m) dominated = out[m].value.dominates(records[k].value);
      if (!dominated) out.push_back(std::move(records[k]));
    }
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
    i = j;
  }
  return out;
}

}  // namespace

bool record_less(const RuleRecord& a, const RuleRecord& b, const TypeTable& types) {
  if (int c = types.compare(a.ty, b.ty)) return c < 0;
  if (a.set() != b.set()) return a.set() < b.set();
  if (a.assumptions != b.assumptions) return a.assumptions < b.assumptions;
  return a.value < b.value;
}

std::vector<RuleRecord> type_rule(const TypingInput& in, const TypingOptions& opts) {
  Engine engine(in, opts);
  std::vector<RuleRecord> records;
  for (const Typed& t : engine.synth(engine.rule().root))
    if (passes_forcing(t.p, opts)) records.push_back(close_record(engine.rule(), t, in.types));
  return canonical_records(std::move(records), in.types);
}

std::vector<RuleRecord> type_body(const TypingInput& in, TyId target, const TypingOptions& opts) {
  const Rule& rule = in.scheme.rule(in.rule);
  std::vector<const std::vector<TyPair>*> arg_sets;
  TyId body_ty;
  if (!in.types.peel(target, rule.param_count(), arg_sets, body_ty)) return {};
  std::vector<std::vector<TyPair>> candidates(rule.param_count());
  for (std::size_t i = 0; i < rule.param_count(); ++i) {
    for (TyPair p : *arg_sets[i]) {
      bool allowed = i < in.candidates.size() &&
                     std::find(in.candidates[i].begin(), in.candidates[i].end(), p) != in.candidates[i].end();
      if (!allowed) return {};
      if (candidates[i].empty() || candidates[i].back() != p) candidates[i].push_back(p);
    }
  }
  TypingInput fixed{in.scheme, in.rule, in.types, in.table, candidates};
  TypingOptions o = opts;
  o.open_params = false;
  Engine engine(fixed, o);
  std::vector<RuleRecord> records;
  for (const Typed& t : engine.synth(rule.root)) {
    if (t.ty != body_ty || !passes_forcing(t.p, opts)) continue;
    RuleRecord r = close_record(rule, t, in.types);
    if (r.ty == target) records.push_back(std::move(r));
  }
  return canonical_records(std::move(records), in.types);
}

std::vector<TyPair> type_occurrence(const TypingInput& in, std::uint32_t node, const TypingOptions& opts) {
  TypingOptions o = opts;
  o.open_params = false;
  o.keep_derivations = false;
  Engine engine(in, o);
  std::vector<TyPair> out;
  for (const Typed& t : engine.synth(node))
    if (passes_forcing(t.p, opts)) out.push_back(TyPair{t.p.letters(), t.ty});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Judgment> judge_node(const TypingInput& in, std::uint32_t node, TyId ty, const TypingOptions& opts) {
  Engine engine(in, opts);
  std::vector<Judgment> out;
  for (const Typed& t : engine.synth(node))
    if (t.ty == ty && passes_forcing(t.p, opts)) out.push_back(Judgment{t.p.env, t.p.value, t.ty});
  return out;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

bool fail(std::string* error, const std::string& msg) {
  if (error) *error = msg;
  return false;
}

void count_assumptions(const DerivNode& d, std::map<std::uint32_t, std::uint32_t>& counts) {
  if (d.kind == DerivNode::Kind::Nonterminal) ++counts[d.binding];
  for (const auto& a : d.args) count_assumptions(*a.deriv, counts);
}

}  // namespace

std::optional<Judgment> verify_derivation(const Scheme& g, NonterminalId rule_id, const DerivNode& d,
                                          const std::vector<TyPair>& bindings, TypeTable& types,
                                          std::string* error) {
  const Rule& rule = g.rule(rule_id);
  if (d.node >= rule.nodes.size()) return fail(error, "node index out of range"), std::nullopt;
  const SpineNode& node = rule.nodes[d.node];
  std::uint32_t s = static_cast<std::uint32_t>(g.multiplicity_cap());
  std::size_t letters = g.letter_count();

  std::optional<Judgment> j;
  switch (d.kind) {
    case DerivNode::Kind::Terminal: {
      if (node.head_kind != SpineNode::Head::Terminal) return fail(error, "head is not a terminal"), std::nullopt;
      ProdSet set;
      if (d.child) {
        std::vector<const std::vector<TyPair>*> arg_sets;
        TyId rest;
        if (!types.peel(d.head_type, *d.child + 1, arg_sets, rest) || arg_sets.back()->size() != 1)
          return fail(error, "malformed terminal type"), std::nullopt;
        set = arg_sets.back()->front().set;
      }
      j = type_constant(g, node.head, d.child, set, types);
      if (!j) return fail(error, "no rule for terminal"), std::nullopt;
      break;
    }
    case DerivNode::Kind::Param:
      if (node.head_kind != SpineNode::Head::Param) return fail(error, "head is not a parameter"), std::nullopt;
      j = type_variable(node.head, d.head_pair);
      break;
    case DerivNode::Kind::Nonterminal:
      if (node.head_kind != SpineNode::Head::Nonterminal)
        return fail(error, "head is not a nonterminal"), std::nullopt;
      if (d.binding >= bindings.size()) return fail(error, "unknown binding"), std::nullopt;
      j = type_assumption(bindings[d.binding]);
      break;
  }
  if (j->ty != d.head_type) return fail(error, "head type mismatch"), std::nullopt;

  for (std::uint32_t pos = 0; pos < node.args.size(); ++pos) {
    std::vector<Judgment> args;
    for (const auto& a : d.args) {
      if (a.position != pos) continue;
      if (!a.deriv || a.deriv->node != node.args[pos]) return fail(error, "argument node mismatch"), std::nullopt;
      auto sub = verify_derivation(g, rule_id, *a.deriv, bindings, types, error);
      if (!sub) return std::nullopt;
      if (sub->pair() != a.pair) return fail(error, "argument pair does not match its derivation"), std::nullopt;
      args.push_back(std::move(*sub));
    }
    j = merge_application(*j, args, s, letters, types);
    if (!j) return fail(error, "(@) side condition violated"), std::nullopt;
  }
  for (const auto& a : d.args)
    if (a.position >= node.args.size()) return fail(error, "argument position out of range"), std::nullopt;
  if (j->ty != d.ty || j->value != d.value || j->env != d.env)
    return fail(error, "stored judgment differs from the recomputed one"), std::nullopt;
  return j;
}

bool verify_record(const Scheme& g, NonterminalId rule_id, const RuleRecord& r, const std::vector<TyPair>& bindings,
                   TypeTable& types, std::string* error) {
  if (!r.deriv) return fail(error, "record has no derivation");
  const Rule& rule = g.rule(rule_id);
  if (r.deriv->node != rule.root) return fail(error, "derivation does not start at the body root");
  auto j = verify_derivation(g, rule_id, *r.deriv, bindings, types, error);
  if (!j) return false;
  for (std::size_t i = rule.param_count(); i-- > 0;) *j = abstract(*j, static_cast<std::uint32_t>(i), types);
  if (!j->env.empty()) return fail(error, "environment not closed by the parameters");
  if (j->ty != r.ty || j->value != r.value) return fail(error, "record type or value differs");
  std::map<std::uint32_t, std::uint32_t> counts;
  count_assumptions(*r.deriv, counts);
  AssumptionSet expected(counts.begin(), counts.end());
  if (expected != r.assumptions) return fail(error, "assumption counts differ");
  return true;
}

}  // namespace supsat

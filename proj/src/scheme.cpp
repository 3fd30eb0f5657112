#include "supsat/scheme.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "supsat/error.hpp"
#include "supsat/structure.hpp"

namespace supsat {

bool SpineNode::contains_nonterminal(NonterminalId id) const {
  return std::binary_search(nonterminals.begin(), nonterminals.end(), id);
}

bool Rule::has_param_in_head_position() const {
  for (const SpineNode& n : nodes)
    if (n.head_kind == SpineNode::Head::Param && !n.args.empty()) return true;
  return false;
}

namespace {

void check_body(const Term& t, const std::set<std::string>& params, const std::string& rule_name,
                const std::unordered_map<std::string, TerminalId>& terminals,
                const std::vector<TerminalDecl>& decls,
                const std::unordered_map<std::string, NonterminalId>& nonterminals,
                const std::vector<NonterminalDecl>& nt_decls) {
  switch (t.kind()) {
    case Term::Kind::Abstraction:
      throw InputError("rule for " + rule_name + " has a lambda inside its body");
    case Term::Kind::Application:
      check_body(t.fun(), params, rule_name, terminals, decls, nonterminals, nt_decls);
      check_body(t.arg(), params, rule_name, terminals, decls, nonterminals, nt_decls);
      return;
    case Term::Kind::Variable:
      if (!params.count(t.name()))
        throw InputError("rule for " + rule_name + " uses unbound variable " + t.name());
      return;
    case Term::Kind::Constant: {
      auto it = terminals.find(t.name());
      if (it == terminals.end()) throw InputError("undeclared terminal " + t.name());
      if (decls[it->second].arity != t.arity())
        throw InputError("arity mismatch for terminal " + t.name());
      return;
    }
    case Term::Kind::Nonterminal: {
      auto it = nonterminals.find(t.name());
      if (it == nonterminals.end()) throw InputError("undefined nonterminal " + t.name());
      if (nt_decls[it->second].sort != t.sort())
        throw SortError("nonterminal " + t.name() + " used at sort " + t.sort().to_string() + ", declared " +
                        nt_decls[it->second].sort.to_string());
      return;
    }
  }
}

}  // namespace

Scheme Scheme::build(SchemeDraft draft) {
  Scheme g;
  for (auto& t : draft.terminals) {
    if (t.name == kOmega && t.arity != 0) throw InputError("omega must have arity 0");
    if (g.terminal_index_.count(t.name)) throw InputError("terminal " + t.name + " declared twice");
    g.terminal_index_.emplace(t.name, static_cast<TerminalId>(g.terminals_.size()));
    g.terminals_.push_back(t);
  }
  if (!g.terminal_index_.count(kOmega)) {
    g.terminal_index_.emplace(kOmega, static_cast<TerminalId>(g.terminals_.size()));
    g.terminals_.push_back({kOmega, 0});
  }
  g.omega_ = g.terminal_index_.at(kOmega);

  for (auto& n : draft.nonterminals) {
    if (g.nonterminal_index_.count(n.name)) throw InputError("nonterminal " + n.name + " declared twice");
    if (g.terminal_index_.count(n.name)) throw InputError(n.name + " is both a terminal and a nonterminal");
    g.nonterminal_index_.emplace(n.name, static_cast<NonterminalId>(g.nonterminals_.size()));
    g.nonterminals_.push_back(n);
  }
  if (g.nonterminals_.empty()) throw InputError("scheme has no rules; start symbol missing");

  std::vector<bool> seen(g.nonterminals_.size(), false);
  g.rules_.resize(g.nonterminals_.size(), Rule{0, {}, {}, Term::constant(kOmega, 0), {}, 0});
  for (auto& rd : draft.rules) {
    auto it = g.nonterminal_index_.find(rd.nonterminal);
    if (it == g.nonterminal_index_.end()) throw InputError("rule for undeclared nonterminal " + rd.nonterminal);
    NonterminalId id = it->second;
    if (seen[id]) throw InputError("duplicate rule for nonterminal " + rd.nonterminal);
    seen[id] = true;

    Rule r{id, {}, {}, rd.body, {}, 0};
    std::set<std::string> names;
    for (const Term& p : rd.params) {
      if (!p.is(Term::Kind::Variable)) throw InputError("rule parameter must be a variable");
      if (!names.insert(p.name()).second)
        throw InputError("parameter " + p.name() + " repeated in rule for " + rd.nonterminal);
      if (g.nonterminal_index_.count(p.name()))
        throw InputError("nonterminal " + p.name() + " used as a bound variable");
      r.param_names.push_back(p.name());
      r.param_sorts.push_back(p.sort());
    }
    if (r.param_names.size() > kMaxParams) throw InputError("too many parameters in rule for " + rd.nonterminal);
    const Sort& declared = g.nonterminals_[id].sort;
    if (Sort::curried(r.param_sorts, rd.body.sort()) != declared)
      throw SortError("rule for " + rd.nonterminal + " has sort " +
                      Sort::curried(r.param_sorts, rd.body.sort()).to_string() + ", declared " +
                      declared.to_string());
    if (r.param_names.empty() && rd.body.is(Term::Kind::Nonterminal))
      throw InputError("right-hand side of " + rd.nonterminal + " is a bare nonterminal");
    check_body(rd.body, names, rd.nonterminal, g.terminal_index_, g.terminals_, g.nonterminal_index_,
               g.nonterminals_);
    g.rules_[id] = std::move(r);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw InputError("no rule for nonterminal " + g.nonterminals_[i].name);

  auto st = g.nonterminal_index_.find(draft.start);
  if (st == g.nonterminal_index_.end()) throw InputError("start symbol " + draft.start + " missing");
  if (!g.nonterminals_[st->second].sort.is_base())
    throw SortError("start symbol " + draft.start + " has sort " + g.nonterminals_[st->second].sort.to_string() +
                    ", expected o");
  g.start_ = st->second;

  for (Rule& r : g.rules_) g.compile_rule(r);
  g = g.with_important(draft.important);
  return g;
}

void Scheme::compile_rule(Rule& rule) {
  rule.nodes.clear();
  std::unordered_map<std::string, std::uint32_t> param_index;
  for (std::size_t i = 0; i < rule.param_names.size(); ++i)
    param_index[rule.param_names[i]] = static_cast<std::uint32_t>(i);

  struct Compiler {
    Scheme& g;
    Rule& rule;
    std::unordered_map<std::string, std::uint32_t>& param_index;

    std::uint32_t compile(const Term& t, std::string path, std::optional<std::uint32_t> parent) {
      const Term& h = t.head();
      SpineNode node;
      switch (h.kind()) {
        case Term::Kind::Constant:
          node.head_kind = SpineNode::Head::Terminal;
          node.head = g.terminal_index_.at(h.name());
          break;
        case Term::Kind::Variable:
          node.head_kind = SpineNode::Head::Param;
          node.head = param_index.at(h.name());
          node.params |= std::uint64_t{1} << node.head;
          break;
        case Term::Kind::Nonterminal:
          node.head_kind = SpineNode::Head::Nonterminal;
          node.head = g.nonterminal_index_.at(h.name());
          node.nonterminals.push_back(node.head);
          break;
        default:
          throw InputError("lambda in rule body");
      }
      node.sort = t.sort();
      node.path = path;
      node.parent = parent;
      auto self = static_cast<std::uint32_t>(rule.nodes.size());
      rule.nodes.push_back(node);
      std::vector<Term> args = t.spine_args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        std::string p = path.empty() ? std::to_string(i + 1) : path + "." + std::to_string(i + 1);
        std::uint32_t child = compile(args[i], p, self);
        SpineNode& me = rule.nodes[self];
        me.args.push_back(child);
        me.params |= rule.nodes[child].params;
        me.nonterminals.insert(me.nonterminals.end(), rule.nodes[child].nonterminals.begin(),
                               rule.nodes[child].nonterminals.end());
      }
      SpineNode& me = rule.nodes[self];
      std::sort(me.nonterminals.begin(), me.nonterminals.end());
      me.nonterminals.erase(std::unique(me.nonterminals.begin(), me.nonterminals.end()), me.nonterminals.end());
      return self;
    }
  };
  Compiler c{*this, rule, param_index};
  rule.root = c.compile(rule.body, "", std::nullopt);
}

std::optional<TerminalId> Scheme::find_terminal(const std::string& name) const {
  auto it = terminal_index_.find(name);
  if (it == terminal_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NonterminalId> Scheme::find_nonterminal(const std::string& name) const {
  auto it = nonterminal_index_.find(name);
  if (it == nonterminal_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Scheme::letter_names() const {
  std::vector<std::string> out;
  for (TerminalId t : important_) out.push_back(terminals_[t].name);
  return out;
}

std::optional<std::size_t> Scheme::letter_of(TerminalId t) const {
  if (t >= letter_index_.size() || letter_index_[t] < 0) return std::nullopt;
  return static_cast<std::size_t>(letter_index_[t]);
}

std::size_t Scheme::multiplicity_cap() const { return std::max<std::size_t>(1, important_.size()); }

Scheme Scheme::with_important(const std::vector<std::string>& letters) const {
  Scheme g = *this;
  g.important_.clear();
  g.letter_index_.assign(terminals_.size(), -1);
  for (const std::string& name : letters) {
    auto t = find_terminal(name);
    if (!t) throw InputError("important letter " + name + " is not a declared terminal");
    if (*t == omega_) throw InputError("omega cannot be an important letter");
    if (g.letter_index_[*t] >= 0) continue;
    if (g.important_.size() == kMaxLetters)
      throw InputError("at most " + std::to_string(kMaxLetters) + " important letters are supported");
    g.letter_index_[*t] = static_cast<int>(g.important_.size());
    g.important_.push_back(*t);
  }
  return g;
}

Term Scheme::rule_term(NonterminalId id) const {
  const Rule& r = rules_[id];
  Term t = r.body;
  for (std::size_t i = r.param_count(); i-- > 0;)
    t = Term::lambda(Term::variable(r.param_names[i], r.param_sorts[i]), t);
  return t;
}

unsigned Scheme::order() const {
  unsigned o = 0;
  for (std::size_t i = 0; i < rules_.size(); ++i)
    o = std::max(o, term_complexity(rule_term(static_cast<NonterminalId>(i))));
  return o;
}

std::string Scheme::to_text() const {
  std::ostringstream os;
  os << "%BEGING\n";
  auto emit = [&](NonterminalId id) {
    const Rule& r = rules_[id];
    os << nonterminals_[id].name;
    for (std::size_t i = 0; i < r.param_count(); ++i) {
      if (r.param_sorts[i].is_base())
        os << ' ' << r.param_names[i];
      else
        os << " (" << r.param_names[i] << " : " << r.param_sorts[i].to_string() << ')';
    }
    os << " -> " << r.body.to_string() << ".\n";
  };
  emit(start_);
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (i != start_) emit(static_cast<NonterminalId>(i));
  os << "%ENDG\n%BEGINT\n";
  for (const TerminalDecl& t : terminals_) os << t.name << " -> " << t.arity << ".\n";
  os << "%ENDT\n";
  if (!important_.empty()) {
    os << "%BEGINI\n";
    for (TerminalId t : important_) os << terminals_[t].name << ".\n";
    os << "%ENDI\n";
  }
  return os.str();
}

}  // namespace supsat

#include "supsat/saturation.hpp"

#include <algorithm>
#include <deque>

#include "supsat/error.hpp"

namespace supsat {

bool hvo_applicable(const Rule& rule) {
  if (rule.has_param_in_head_position()) return false;
  const SpineNode& root = rule.nodes[rule.root];
  return !(root.head_kind == SpineNode::Head::Param && !root.sort.is_base());
}

std::vector<TyPair> Saturation::bindings() const {
  std::vector<TyPair> out;
  out.reserve(nodes_.size());
  for (const BindingNode& n : nodes_) out.push_back(n.binding);
  return out;
}

std::vector<std::vector<std::uint32_t>> Saturation::successors() const {
  std::vector<std::vector<std::uint32_t>> out(nodes_.size());
  for (const GraphEdge& e : edges_) out[e.from].push_back(e.to);
  return out;
}

std::optional<std::uint32_t> Saturation::find(NonterminalId x, TyPair binding) const {
  auto it = index_.find({x, binding.packed()});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Saturation::start_binding() const {
  return find(scheme_->start(), TyPair{ProdSet::all(scheme_->letter_count()), types_->atom()});
}

std::vector<std::uint32_t> Saturation::start_nodes() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t id = 0; id < nodes_.size(); ++id)
    if (nodes_[id].nonterminal == scheme_->start()) out.push_back(id);
  return out;
}

std::set<std::uint32_t> Saturation::reachable_from(const std::vector<std::uint32_t>& roots) const {
  auto succ = successors();
  std::set<std::uint32_t> seen(roots.begin(), roots.end());
  std::vector<std::uint32_t> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    for (std::uint32_t m : succ[n])
      if (seen.insert(m).second) stack.push_back(m);
  }
  return seen;
}

const std::vector<TyPair>& Saturation::candidates(NonterminalId x, std::uint32_t param) const {
  return candidates_[x][param];
}

std::string Saturation::render_binding(TyPair binding) const {
  return "(" + to_string(binding.set, scheme_->letter_names()) + ", " +
         types_->render(binding.ty, scheme_->letter_names()) + ")";
}

std::string Saturation::render_node(std::uint32_t id) const {
  return scheme_->nonterminals()[nodes_[id].nonterminal].name + " : " + render_binding(nodes_[id].binding);
}

std::string Saturation::dump_derivations() const {
  std::string out;
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    for (const RuleRecord& r : records_[id]) {
      out += render_node(id) + " value=" + r.value.to_string(scheme_->letter_count()) + " via {";
      for (std::size_t i = 0; i < r.assumptions.size(); ++i) {
        if (i) out += ", ";
        out += render_node(r.assumptions[i].first) + " x" + std::to_string(r.assumptions[i].second);
      }
      out += "}\n";
    }
  }
  return out;
}

class Saturator {
 public:
  Saturator(const Scheme& g, const FlowTable& flows, const SaturationOptions& opts, std::shared_ptr<TypeTable> types)
      : flows_(flows), opts_(opts), start_time_(std::chrono::steady_clock::now()) {
    out_.scheme_ = std::make_shared<const Scheme>(g);
    out_.types_ = types ? std::move(types) : std::make_shared<TypeTable>();
    deadline_ = start_time_ + opts.timeout;
    std::size_t n = g.rules().size();
    table_.resize(n);
    out_.candidates_.resize(n);
    seen_candidates_.resize(n);
    out_.hvo_applied_.resize(n);
    for (NonterminalId x = 0; x < n; ++x) {
      out_.candidates_[x].resize(g.rule(x).param_count());
      seen_candidates_[x].resize(g.rule(x).param_count());
      out_.hvo_applied_[x] = opts.hvo && hvo_applicable(g.rule(x));
    }
    occurrences_ = flows.occurrences();
  }

  Saturation run() {
    const Scheme& g = scheme();
    for (NonterminalId x = 0; x < g.rules().size(); ++x) retype_rule(x, {});
    for (const Occurrence& o : occurrences_) retype_occurrence(o, {});
    while (!queue_.empty()) {
      check_deadline();
      Event e = queue_.front();
      queue_.pop_front();
      ++out_.stats_.iterations;
      if (e.kind == Event::Binding)
        on_binding(e.id);
      else
        on_candidate(e.slot, e.pair);
    }
    finish();
    return std::move(out_);
  }

 private:
  struct Event {
    enum Kind { Binding, Candidate } kind;
    std::uint32_t id = 0;
    ParamSlot slot{};
    TyPair pair{};
  };

  const Scheme& scheme() const { return *out_.scheme_; }

  void check_deadline() const {
    if (std::chrono::steady_clock::now() > deadline_)
      throw ResourceExceeded(ResourceExceeded::Kind::Timeout, "saturation timed out");
  }

  TypingOptions typing_options(NonterminalId x) const {
    TypingOptions t;
    t.open_params = out_.hvo_applied_[x];
    t.keep_derivations = opts_.keep_derivations;
    t.reverse = opts_.reverse;
    t.deadline = deadline_;
    t.max_partials = opts_.max_partials;
    return t;
  }

  void retype_rule(NonterminalId x, TypingOptions extra) {
    TypingOptions t = typing_options(x);
    t.forced_binding = extra.forced_binding;
    t.forced_param = extra.forced_param;
    ++out_.stats_.typing_calls;
    TypingInput in{scheme(), x, *out_.types_, table_, out_.candidates_[x]};
    add_records(x, type_rule(in, t));
  }

  void retype_occurrence(const Occurrence& o, TypingOptions extra) {
    TypingOptions t = typing_options(o.rule);
    t.forced_binding = extra.forced_binding;
    t.forced_param = extra.forced_param;
    ++out_.stats_.typing_calls;
    TypingInput in{scheme(), o.rule, *out_.types_, table_, out_.candidates_[o.rule]};
    std::vector<TyPair> pairs = type_occurrence(in, o.node, t);
    for (const ParamSlot& slot : flows_.targets(o))
      for (TyPair p : pairs)
        if (seen_candidates_[slot.first][slot.second].insert(p).second) {
          out_.candidates_[slot.first][slot.second].push_back(p);
          queue_.push_back(Event{Event::Candidate, 0, slot, p});
        }
  }

  void on_binding(std::uint32_t id) {
    const Scheme& g = scheme();
    NonterminalId y = out_.nodes_[id].nonterminal;
    TypingOptions forced;
    if (opts_.fntty) forced.forced_binding = id;
    for (NonterminalId x = 0; x < g.rules().size(); ++x) {
      const Rule& rule = g.rule(x);
      if (rule.nodes[rule.root].contains_nonterminal(y)) retype_rule(x, forced);
    }
    for (const Occurrence& o : occurrences_)
      if (g.rule(o.rule).nodes[o.node].contains_nonterminal(y)) retype_occurrence(o, forced);
  }

  void on_candidate(ParamSlot slot, TyPair pair) {
    const Scheme& g = scheme();
    auto [x, i] = slot;
    TypingOptions forced;
    if (opts_.ftty) forced.forced_param = std::make_pair(i, pair);
    if (!out_.hvo_applied_[x]) retype_rule(x, forced);
    for (const Occurrence& o : occurrences_)
      if (o.rule == x && g.rule(o.rule).nodes[o.node].contains_param(i)) retype_occurrence(o, forced);
  }

  void add_records(NonterminalId x, std::vector<RuleRecord> records) {
    for (RuleRecord& r : records) {
      TyPair binding = r.binding();
      auto [it, inserted] =
          out_.index_.try_emplace({x, binding.packed()}, static_cast<std::uint32_t>(out_.nodes_.size()));
      std::uint32_t id = it->second;
      if (inserted) {
        if (out_.nodes_.size() >= opts_.max_bindings)
          throw ResourceExceeded(ResourceExceeded::Kind::Memory, "binding cap reached");
        out_.nodes_.push_back(BindingNode{x, binding});
        out_.records_.emplace_back();
        table_[x].push_back(TableEntry{id, binding});
        queue_.push_back(Event{Event::Binding, id, {}, {}});
      }
      for (auto [y, count] : r.assumptions) {
        ProdSet mask;
        ProdSet price = out_.nodes_[y].binding.set;
        for (std::size_t a = 0; a < scheme().letter_count(); ++a)
          if (r.value[a] > (price.contains(a) ? 1u : 0u)) mask |= ProdSet::single(a);
        edges_[{id, y}] |= mask;
      }
      store(id, std::move(r));
    }
  }

  // Keeps an antichain of values per assumption multiset; the first record stays first.
  void store(std::uint32_t id, RuleRecord r) {
    auto& list = out_.records_[id];
    for (const RuleRecord& o : list)
      if (o.assumptions == r.assumptions && o.value.dominates(r.value)) return;
    for (std::size_t k = list.size(); k-- > 1;)
      if (list[k].assumptions == r.assumptions && r.value.dominates(list[k].value))
        list.erase(list.begin() + static_cast<std::ptrdiff_t>(k));
    list.push_back(std::move(r));
  }

  void finish() {
    for (const auto& [key, mask] : edges_) {
      out_.edges_.push_back(GraphEdge{key.first, key.second, mask});
      if (!mask.empty()) ++out_.stats_.productive_edges;
    }
    out_.stats_.bindings = out_.nodes_.size();
    out_.stats_.edges = out_.edges_.size();
    out_.stats_.ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_time_).count();
  }

  Saturation out_;
  const FlowTable& flows_;
  SaturationOptions opts_;
  std::chrono::steady_clock::time_point start_time_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::vector<TableEntry>> table_;
  std::vector<std::vector<std::set<TyPair>>> seen_candidates_;
  std::vector<Occurrence> occurrences_;
  std::deque<Event> queue_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, ProdSet> edges_;
};

Saturation saturate(const Scheme& g, const FlowTable& flows, const SaturationOptions& opts,
                    std::shared_ptr<TypeTable> types) {
  return Saturator(g, flows, opts, std::move(types)).run();
}

}  // namespace supsat

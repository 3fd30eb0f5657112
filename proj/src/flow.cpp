#include "supsat/flow.hpp"

namespace supsat {

namespace {

const std::set<Occurrence> kNoOccurrences;
const std::vector<ParamSlot> kNoSlots;

// A nonterminal applied to `applied` arguments.
using HeadValue = std::pair<NonterminalId, std::uint32_t>;

class Solver {
 public:
  explicit Solver(const Scheme& g) : g_(g) {}

  void run() {
    changed_ = true;
    while (changed_) {
      changed_ = false;
      for (NonterminalId y = 0; y < g_.rules().size(); ++y) {
        const Rule& rule = g_.rule(y);
        for (std::uint32_t n = 0; n < rule.nodes.size(); ++n) visit(y, n);
      }
      forward_extra_arguments();
    }
  }

  std::map<ParamSlot, std::set<Occurrence>> flows;

 private:
  void add_flow(ParamSlot slot, const Occurrence& o) {
    if (flows[slot].insert(o).second) changed_ = true;
  }

  void add_head_value(const Occurrence& o, HeadValue hv) {
    if (heads_[o].insert(hv).second) changed_ = true;
  }

  void visit(NonterminalId y, std::uint32_t n) {
    const SpineNode& node = g_.rule(y).nodes[n];
    Occurrence self{y, n};
    auto m = static_cast<std::uint32_t>(node.args.size());
    switch (node.head_kind) {
      case SpineNode::Head::Terminal:
        return;
      case SpineNode::Head::Nonterminal:
        add_head_value(self, {node.head, m});
        for (std::uint32_t j = 0; j < m; ++j) add_flow({node.head, j}, Occurrence{y, node.args[j]});
        return;
      case SpineNode::Head::Param: {
        auto it = flows.find({y, node.head});
        if (it == flows.end()) return;
        std::vector<HeadValue> values;
        for (const Occurrence& o : it->second) {
          auto h = heads_.find(o);
          if (h != heads_.end()) values.insert(values.end(), h->second.begin(), h->second.end());
        }
        for (auto [w, applied] : values) {
          add_head_value(self, {w, applied + m});
          for (std::uint32_t j = 0; j < m; ++j) add_flow({w, applied + j}, Occurrence{y, node.args[j]});
        }
        return;
      }
    }
  }

  // Positions past a rule's parameters are arguments of its body's head values.
  void forward_extra_arguments() {
    std::vector<std::pair<ParamSlot, Occurrence>> moves;
    for (const auto& [slot, occs] : flows) {
      const Rule& rule = g_.rule(slot.first);
      auto k = static_cast<std::uint32_t>(rule.param_count());
      if (slot.second < k) continue;
      auto h = heads_.find(Occurrence{slot.first, rule.root});
      if (h == heads_.end()) continue;
      for (auto [w, applied] : h->second)
        for (const Occurrence& o : occs) moves.push_back({{w, applied + slot.second - k}, o});
    }
    for (const auto& [slot, o] : moves) add_flow(slot, o);
  }

  const Scheme& g_;
  std::map<Occurrence, std::set<HeadValue>> heads_;
  bool changed_ = false;
};

}  // namespace

const std::set<Occurrence>& FlowTable::flows(NonterminalId x, std::uint32_t param) const {
  auto it = flows_.find({x, param});
  return it == flows_.end() ? kNoOccurrences : it->second;
}

const std::vector<ParamSlot>& FlowTable::targets(const Occurrence& o) const {
  auto it = targets_.find(o);
  return it == targets_.end() ? kNoSlots : it->second;
}

std::vector<Occurrence> FlowTable::occurrences() const {
  std::vector<Occurrence> out;
  for (const auto& [o, slots] : targets_) out.push_back(o);
  return out;
}

std::size_t FlowTable::size() const {
  std::size_t n = 0;
  for (const auto& [slot, occs] : flows_) n += occs.size();
  return n;
}

std::string occurrence_name(const Scheme& g, const Occurrence& o) {
  return g.nonterminals()[o.rule].name + "@" + g.rule(o.rule).nodes[o.node].path;
}

std::string FlowTable::dump(const Scheme& g) const {
  std::string out;
  for (NonterminalId x = 0; x < g.rules().size(); ++x) {
    for (std::uint32_t i = 0; i < g.rule(x).param_count(); ++i) {
      out += "(" + g.nonterminals()[x].name + ", " + std::to_string(i + 1) + ") <- {";
      bool first = true;
      for (const Occurrence& o : flows(x, i)) {
        if (!first) out += ", ";
        first = false;
        out += occurrence_name(g, o);
      }
      out += "}\n";
    }
  }
  return out;
}

FlowTable compute_flows(const Scheme& g) {
  Solver solver(g);
  solver.run();
  FlowTable table;
  for (auto& [slot, occs] : solver.flows) {
    if (slot.second >= g.rule(slot.first).param_count()) continue;
    for (const Occurrence& o : occs) table.targets_[o].push_back(slot);
    table.flows_.emplace(slot, std::move(occs));
  }
  return table;
}

}  // namespace supsat

#include "supsat/sort.hpp"

#include <algorithm>
#include <stdexcept>

namespace supsat {

Sort Sort::arrow(Sort argument, Sort result) {
  unsigned order = std::max(1 + argument.order(), result.order());
  std::size_t h = argument.hash() * 1000003u ^ (result.hash() + 0x9e3779b97f4a7c15ull);
  return Sort(std::make_shared<const Node>(Node{std::move(argument), std::move(result), order, h}));
}

Sort Sort::first_order(std::size_t arity) {
  Sort s;
  for (std::size_t i = 0; i < arity; ++i) s = arrow(Sort(), s);
  return s;
}

Sort Sort::curried(const std::vector<Sort>& args, Sort result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
  return result;
}

const Sort& Sort::argument() const {
  if (!node_) throw std::logic_error("base sort has no argument");
  return node_->argument;
}

const Sort& Sort::result() const {
  if (!node_) throw std::logic_error("base sort has no result");
  return node_->result;
}

unsigned Sort::order() const { return node_ ? node_->order : 0; }

std::size_t Sort::arity() const {
  std::size_t n = 0;
  for (const Sort* s = this; !s->is_base(); s = &s->result()) ++n;
  return n;
}

std::vector<Sort> Sort::arguments() const {
  std::vector<Sort> out;
  for (const Sort* s = this; !s->is_base(); s = &s->result()) out.push_back(s->argument());
  return out;
}

Sort Sort::drop(std::size_t n) const {
  Sort s = *this;
  for (std::size_t i = 0; i < n; ++i) s = s.result();
  return s;
}

std::size_t Sort::hash() const { return node_ ? node_->hash : 0x51ed27u; }

std::string Sort::to_string() const {
  if (is_base()) return "o";
  std::string lhs = argument().to_string();
  if (!argument().is_base()) lhs = "(" + lhs + ")";
  return lhs + " -> " + result().to_string();
}

bool operator==(const Sort& a, const Sort& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->order != b.node_->order) return false;
  return a.node_->argument == b.node_->argument && a.node_->result == b.node_->result;
}

}  // namespace supsat

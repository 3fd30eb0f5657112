#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace supsat {

// Simple type over the single base sort `o`. Immutable; copies share structure.
class Sort {
 public:
  Sort() = default;  // base sort

  static Sort base() { return Sort(); }
  static Sort arrow(Sort argument, Sort result);
  // o -> o -> ... -> o with `arity` arrows; the sort of a terminal.
  static Sort first_order(std::size_t arity);
  // args[0] -> args[1] -> ... -> result
  static Sort curried(const std::vector<Sort>& args, Sort result = Sort());

  bool is_base() const { return node_ == nullptr; }
  const Sort& argument() const;
  const Sort& result() const;

  unsigned order() const;
  // Number of top-level arrows.
  std::size_t arity() const;
  std::vector<Sort> arguments() const;
  // Sort after supplying `n` arguments.
  Sort drop(std::size_t n) const;

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const Sort& a, const Sort& b);
  friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }

 private:
  struct Node;
  explicit Sort(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Sort::Node {
  Sort argument;
  Sort result;
  unsigned order;
  std::size_t hash;
};

}  // namespace supsat

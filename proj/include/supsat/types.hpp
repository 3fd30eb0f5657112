#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "supsat/scheme.hpp"
#include "supsat/sort.hpp"

namespace supsat {

// Subset of the important letters, as a bitmask over letter indices.
struct ProdSet {
  std::uint32_t bits = 0;

  static ProdSet none() { return {}; }
  static ProdSet single(std::size_t letter) { return {std::uint32_t{1} << letter}; }
  static ProdSet all(std::size_t letters) { return {letters >= 32 ? ~0u : (std::uint32_t{1} << letters) - 1}; }

  bool empty() const { return bits == 0; }
  bool contains(std::size_t letter) const { return (bits >> letter) & 1u; }
  bool subset_of(ProdSet o) const { return (bits & ~o.bits) == 0; }
  ProdSet operator|(ProdSet o) const { return {bits | o.bits}; }
  ProdSet& operator|=(ProdSet o) {
    bits |= o.bits;
    return *this;
  }
  friend bool operator==(ProdSet a, ProdSet b) { return a.bits == b.bits; }
  friend bool operator!=(ProdSet a, ProdSet b) { return a.bits != b.bits; }
  friend bool operator<(ProdSet a, ProdSet b) { return a.bits < b.bits; }
};

// Renders as a letter set, e.g. {a,b}.
std::string to_string(ProdSet p, const std::vector<std::string>& letters);

// Productivity value: one natural per important letter.
class ValueVec {
 public:
  ValueVec() { v_.fill(0); }

  static ValueVec zero() { return {}; }
  // Characteristic vector of a letter set: 1 on members, 0 elsewhere.
  static ValueVec chi(ProdSet set);

  std::uint32_t operator[](std::size_t i) const { return v_[i]; }
  std::uint32_t& operator[](std::size_t i) { return v_[i]; }

  ValueVec& operator+=(const ValueVec& o) {
    for (std::size_t i = 0; i < kMaxLetters; ++i) v_[i] += o.v_[i];
    return *this;
  }
  friend ValueVec operator+(ValueVec a, const ValueVec& b) { return a += b; }

  // Adds k * chi(set).
  void add_scaled(ProdSet set, std::uint32_t k);

  bool is_zero() const;
  // Componentwise >=.
  bool dominates(const ValueVec& o) const;
  friend bool operator==(const ValueVec& a, const ValueVec& b) { return a.v_ == b.v_; }
  friend bool operator!=(const ValueVec& a, const ValueVec& b) { return a.v_ != b.v_; }
  friend bool operator<(const ValueVec& a, const ValueVec& b) { return a.v_ < b.v_; }

  std::size_t hash() const;
  std::string to_string(std::size_t letters) const;

 private:
  std::array<std::uint32_t, kMaxLetters> v_;
};

// {a : v(a) > 0}
ProdSet flag_of(const ValueVec& v);

// Handle to an interned type; equal handles iff equal types (within one table).
struct TyId {
  std::uint32_t id = 0;
  friend bool operator==(TyId a, TyId b) { return a.id == b.id; }
  friend bool operator!=(TyId a, TyId b) { return a.id != b.id; }
  friend bool operator<(TyId a, TyId b) { return a.id < b.id; }
};

struct TyPair {
  ProdSet set;
  TyId ty;
  friend bool operator==(TyPair a, TyPair b) { return a.set == b.set && a.ty == b.ty; }
  friend bool operator!=(TyPair a, TyPair b) { return !(a == b); }
  // Handle order; use TypeTable::compare for the canonical structural order.
  friend bool operator<(TyPair a, TyPair b) { return a.set != b.set ? a.set < b.set : a.ty < b.ty; }
  std::uint64_t packed() const { return (std::uint64_t{set.bits} << 32) | ty.id; }
};

// Multiset capped at s copies per element, stored sorted with counts.
template <class T, class Less = std::less<T>>
class SMultiset {
 public:
  using Entry = std::pair<T, std::uint32_t>;

  SMultiset() = default;

  const std::vector<Entry>& entries() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t distinct() const { return items_.size(); }
  std::size_t size() const {
    std::size_t n = 0;
    for (const Entry& e : items_) n += e.second;
    return n;
  }

  std::uint32_t count(const T& x) const {
    auto it = find(x);
    return it != items_.end() && !Less{}(x, it->first) ? it->second : 0;
  }

  // Adds n copies, capping the element's count at s.
  void add(const T& x, std::uint32_t n, std::uint32_t s) {
    if (n == 0) return;
    auto it = find(x);
    if (it != items_.end() && !Less{}(x, it->first))
      it->second = std::min(it->second + n, s);
    else
      items_.insert(it, Entry{x, std::min(n, s)});
  }

  // Union of s-multisets: an element with counts n and m appears min(n + m, s) times.
  static SMultiset unite(const SMultiset& u, const SMultiset& v, std::uint32_t s) {
    SMultiset out;
    out.items_.reserve(u.items_.size() + v.items_.size());
    auto a = u.items_.begin(), b = v.items_.begin();
    Less less;
    while (a != u.items_.end() || b != v.items_.end()) {
      if (b == v.items_.end() || (a != u.items_.end() && less(a->first, b->first))) {
        out.items_.push_back({a->first, std::min(a->second, s)});
        ++a;
      } else if (a == u.items_.end() || less(b->first, a->first)) {
        out.items_.push_back({b->first, std::min(b->second, s)});
        ++b;
      } else {
        out.items_.push_back({a->first, std::min(a->second + b->second, s)});
        ++a;
        ++b;
      }
    }
    return out;
  }

  template <class Pred>
  SMultiset filter(Pred pred) const {
    SMultiset out;
    for (const Entry& e : items_)
      if (pred(e.first)) out.items_.push_back(e);
    return out;
  }

  friend bool operator==(const SMultiset& a, const SMultiset& b) { return a.items_ == b.items_; }
  friend bool operator!=(const SMultiset& a, const SMultiset& b) { return !(a == b); }
  friend bool operator<(const SMultiset& a, const SMultiset& b) { return a.items_ < b.items_; }

 private:
  typename std::vector<Entry>::iterator find(const T& x) {
    return std::lower_bound(items_.begin(), items_.end(), x,
                            [](const Entry& e, const T& k) { return Less{}(e.first, k); });
  }
  typename std::vector<Entry>::const_iterator find(const T& x) const {
    return std::lower_bound(items_.begin(), items_.end(), x,
                            [](const Entry& e, const T& k) { return Less{}(e.first, k); });
  }

  std::vector<Entry> items_;
};

template <class T, class Less>
SMultiset<T, Less> smultiset_union(const SMultiset<T, Less>& u, const SMultiset<T, Less>& v, std::uint32_t s) {
  return SMultiset<T, Less>::unite(u, v, s);
}

// A type binding x:(A, tau) for parameter index `var`.
struct EnvBinding {
  std::uint32_t var;
  TyPair pair;
  friend bool operator==(const EnvBinding& a, const EnvBinding& b) { return a.var == b.var && a.pair == b.pair; }
  friend bool operator<(const EnvBinding& a, const EnvBinding& b) {
    return a.var != b.var ? a.var < b.var : a.pair < b.pair;
  }
};

using TyEnv = SMultiset<EnvBinding>;

// Bindings whose productivity set contains `letter`.
TyEnv env_restrict(const TyEnv& env, std::size_t letter);
// Union of the productivity sets of all bindings.
ProdSet env_letters(const TyEnv& env);

// Sum over envs of |env restricted to letter| minus |union of the restricted envs|.
std::uint32_t dupl(const std::vector<TyEnv>& envs, std::size_t letter, std::uint32_t s);
ValueVec dupl_vector(const std::vector<TyEnv>& envs, std::size_t letters, std::uint32_t s);

// Interning table for intersection types. The atom r has handle 0.
// Interning is linearizable; handles and nodes are immutable once returned.
class TypeTable {
 public:
  struct Node {
    bool atom;
    std::vector<TyPair> args;  // canonical order, repeats allowed (s-multiset)
    TyId result;
    std::size_t hash;
  };

  TypeTable();
  TypeTable(const TypeTable&) = delete;
  TypeTable& operator=(const TypeTable&) = delete;
  ~TypeTable();

  TyId atom() const { return TyId{0}; }
  // /\args -> result. `args` is any permutation of the multiset.
  TyId arrow(std::vector<TyPair> args, TyId result);
  TyId top_arrow(TyId result) { return arrow({}, result); }

  const Node& node(TyId t) const;
  bool is_atom(TyId t) const { return t.id == 0; }
  const std::vector<TyPair>& args(TyId t) const { return node(t).args; }
  TyId result(TyId t) const { return node(t).result; }
  // Argument multisets of the first n arrows; false if t has fewer arrows.
  bool peel(TyId t, std::size_t n, std::vector<const std::vector<TyPair>*>& args, TyId& rest) const;

  // Canonical structural order: atom first, then arrows by argument list then result.
  int compare(TyId a, TyId b) const;
  int compare(TyPair a, TyPair b) const;
  bool less(TyPair a, TyPair b) const { return compare(a, b) < 0; }

  std::string render(TyId t, const std::vector<std::string>& letters) const;
  std::string render(TyPair p, const std::vector<std::string>& letters) const;

  std::size_t size() const { return count_.load(std::memory_order_acquire); }

 private:
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = 1 << 14;

  struct KeyHash {
    std::size_t operator()(const std::pair<std::vector<std::uint64_t>, std::uint32_t>& k) const;
  };

  TyId push(Node n);

  std::unique_ptr<std::atomic<Node*>[]> chunks_;
  std::atomic<std::size_t> count_{0};
  std::mutex mu_;
  std::unordered_map<std::pair<std::vector<std::uint64_t>, std::uint32_t>, std::uint32_t, KeyHash> index_;
};

// Every type of the given sort with productivity sets over `letters` letters and
// argument multiplicities up to s, each exactly once, in canonical order. Throws
// ResourceExceeded when more than `limit` types would be produced.
std::vector<TyId> enumerate_types(const Sort& sort, std::size_t letters, std::uint32_t s, TypeTable& table,
                                  std::size_t limit = 1'000'000);

}  // namespace supsat

#include "supsat/types.hpp"

#include <sstream>

#include "supsat/error.hpp"

namespace supsat {

std::string to_string(ProdSet p, const std::vector<std::string>& letters) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < 32; ++i) {
    if (!p.contains(i)) continue;
    if (!first) out += ",";
    first = false;
    out += i < letters.size() ? letters[i] : "#" + std::to_string(i);
  }
  return out + "}";
}

ValueVec ValueVec::chi(ProdSet set) {
  ValueVec v;
  v.add_scaled(set, 1);
  return v;
}

void ValueVec::add_scaled(ProdSet set, std::uint32_t k) {
  for (std::size_t i = 0; i < kMaxLetters; ++i)
    if (set.contains(i)) v_[i] += k;
}

bool ValueVec::is_zero() const {
  for (auto x : v_)
    if (x) return false;
  return true;
}

bool ValueVec::dominates(const ValueVec& o) const {
  for (std::size_t i = 0; i < kMaxLetters; ++i)
    if (v_[i] < o.v_[i]) return false;
  return true;
}

std::size_t ValueVec::hash() const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto x : v_) h = (h ^ x) * 0x100000001b3ull;
  return h;
}

std::string ValueVec::to_string(std::size_t letters) const {
  if (letters == 1) return std::to_string(v_[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < letters; ++i) {
    if (i) out += ",";
    out += std::to_string(v_[i]);
  }
  return out + ")";
}

ProdSet flag_of(const ValueVec& v) {
  ProdSet p;
  for (std::size_t i = 0; i < kMaxLetters; ++i)
    if (v[i] > 0) p |= ProdSet::single(i);
  return p;
}

TyEnv env_restrict(const TyEnv& env, std::size_t letter) {
  return env.filter([letter](const EnvBinding& b) { return b.pair.set.contains(letter); });
}

ProdSet env_letters(const TyEnv& env) {
  ProdSet p;
  for (const auto& [b, n] : env.entries()) p |= b.pair.set;
  return p;
}

std::uint32_t dupl(const std::vector<TyEnv>& envs, std::size_t letter, std::uint32_t s) {
  std::uint32_t total = 0;
  TyEnv merged;
  for (const TyEnv& env : envs) {
    TyEnv r = env_restrict(env, letter);
    total += static_cast<std::uint32_t>(r.size());
    merged = smultiset_union(merged, r, s);
  }
  return total - static_cast<std::uint32_t>(merged.size());
}

ValueVec dupl_vector(const std::vector<TyEnv>& envs, std::size_t letters, std::uint32_t s) {
  ValueVec v;
  for (std::size_t a = 0; a < letters; ++a) v[a] = dupl(envs, a, s);
  return v;
}

std::size_t TypeTable::KeyHash::operator()(const std::pair<std::vector<std::uint64_t>, std::uint32_t>& k) const {
  std::size_t h = std::hash<std::uint32_t>{}(k.second);
  for (auto x : k.first) h = (h ^ std::hash<std::uint64_t>{}(x)) * 0x9e3779b97f4a7c15ull;
  return h;
}

TypeTable::TypeTable() : chunks_(new std::atomic<Node*>[kMaxChunks]) {
  for (std::size_t i = 0; i < kMaxChunks; ++i) chunks_[i].store(nullptr, std::memory_order_relaxed);
  push(Node{true, {}, TyId{0}, 0});
}

TypeTable::~TypeTable() {
  for (std::size_t i = 0; i < kMaxChunks; ++i) delete[] chunks_[i].load(std::memory_order_relaxed);
}

TyId TypeTable::push(Node n) {
  std::size_t id = count_.load(std::memory_order_relaxed);
  std::size_t chunk = id >> kChunkBits;
  if (chunk >= kMaxChunks) throw ResourceExceeded(ResourceExceeded::Kind::Memory, "type table full");
  Node* block = chunks_[chunk].load(std::memory_order_relaxed);
  if (!block) {
    block = new Node[kChunkSize];
    chunks_[chunk].store(block, std::memory_order_release);
  }
  block[id & (kChunkSize - 1)] = std::move(n);
  count_.store(id + 1, std::memory_order_release);
  return TyId{static_cast<std::uint32_t>(id)};
}

const TypeTable::Node& TypeTable::node(TyId t) const {
  return chunks_[t.id >> kChunkBits].load(std::memory_order_acquire)[t.id & (kChunkSize - 1)];
}

TyId TypeTable::arrow(std::vector<TyPair> args, TyId result) {
  std::sort(args.begin(), args.end(), [this](TyPair a, TyPair b) { return compare(a, b) < 0; });
  std::vector<std::uint64_t> key;
  key.reserve(args.size());
  for (TyPair p : args) key.push_back(p.packed());
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = index_.try_emplace({std::move(key), result.id}, 0);
  if (!inserted) return TyId{it->second};
  std::size_t h = KeyHash{}(it->first);
  TyId id = push(Node{false, std::move(args), result, h});
  it->second = id.id;
  return id;
}

bool TypeTable::peel(TyId t, std::size_t n, std::vector<const std::vector<TyPair>*>& args, TyId& rest) const {
  args.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (is_atom(t)) return false;
    const Node& nd = node(t);
    args.push_back(&nd.args);
    t = nd.result;
  }
  rest = t;
  return true;
}

int TypeTable::compare(TyId a, TyId b) const {
  if (a == b) return 0;
  if (is_atom(a)) return -1;
  if (is_atom(b)) return 1;
  const Node& na = node(a);
  const Node& nb = node(b);
  std::size_t n = std::min(na.args.size(), nb.args.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(na.args[i], nb.args[i])) return c;
  if (na.args.size() != nb.args.size()) return na.args.size() < nb.args.size() ? -1 : 1;
  return compare(na.result, nb.result);
}

int TypeTable::compare(TyPair a, TyPair b) const {
  if (a.set != b.set) return a.set < b.set ? -1 : 1;
  return compare(a.ty, b.ty);
}

std::string TypeTable::render(TyPair p, const std::vector<std::string>& letters) const {
  std::string flag = p.set.empty() ? "np" : "pr:" + to_string(p.set, letters);
  return "(" + flag + ", " + render(p.ty, letters) + ")";
}

std::string TypeTable::render(TyId t, const std::vector<std::string>& letters) const {
  if (is_atom(t)) return "r";
  const Node& n = node(t);
  std::string out;
  if (n.args.empty()) {
    out = "T";
  } else {
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      if (i) out += " /\\ ";
      out += render(n.args[i], letters);
    }
  }
  return out + " -> " + render(n.result, letters);
}

namespace {

void enumerate_counts(const std::vector<TyPair>& pairs, std::size_t i, std::uint32_t s, std::vector<TyPair>& cur,
                      std::vector<std::vector<TyPair>>& out) {
  if (i == pairs.size()) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t c = 0; c <= s; ++c) {
    enumerate_counts(pairs, i + 1, s, cur, out);
    cur.push_back(pairs[i]);
  }
  cur.resize(cur.size() - (s + 1));
}

}  // namespace

std::vector<TyId> enumerate_types(const Sort& sort, std::size_t letters, std::uint32_t s, TypeTable& table,
                                  std::size_t limit) {
  if (sort.is_base()) return {table.atom()};
  std::vector<TyId> argument_types = enumerate_types(sort.argument(), letters, s, table, limit);
  std::vector<TyId> result_types = enumerate_types(sort.result(), letters, s, table, limit);
  std::vector<TyPair> pairs;
  std::uint32_t subsets = std::uint32_t{1} << letters;
  for (std::uint32_t bits = 0; bits < subsets; ++bits)
    for (TyId t : argument_types) pairs.push_back(TyPair{ProdSet{bits}, t});
  std::sort(pairs.begin(), pairs.end(), [&](TyPair a, TyPair b) { return table.compare(a, b) < 0; });

  double estimate = static_cast<double>(result_types.size());
  for (std::size_t i = 0; i < pairs.size() && estimate <= static_cast<double>(limit); ++i) estimate *= s + 1;
  if (estimate > static_cast<double>(limit))
    throw ResourceExceeded(ResourceExceeded::Kind::Memory, "type space of sort " + sort.to_string() + " too large");

  std::vector<std::vector<TyPair>> multisets;
  std::vector<TyPair> cur;
  enumerate_counts(pairs, 0, s, cur, multisets);
  std::vector<TyId> out;
  out.reserve(multisets.size() * result_types.size());
  for (const auto& m : multisets)
    for (TyId r : result_types) out.push_back(table.arrow(m, r));
  std::sort(out.begin(), out.end(), [&](TyId a, TyId b) { return table.compare(a, b) < 0; });
  return out;
}

}  // namespace supsat

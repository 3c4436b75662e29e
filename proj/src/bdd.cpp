#include "multippl/bdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "multippl/errors.hpp"

namespace multippl {

std::size_t BddManager::TripleHash::operator()(const Triple& k) const noexcept {
  std::uint64_t h = (std::uint64_t{std::get<0>(k)} << 32) ^ std::get<1>(k);
  h ^= std::uint64_t{std::get<2>(k)} * 0x9E3779B97F4A7C15ull;
  h ^= h >> 29;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 32;
  return static_cast<std::size_t>(h);
}

BddManager::BddManager(std::size_t var_capacity) : capacity_(var_capacity) {
  nodes_.push_back({kTerminalVar, kFalse, kFalse});
  nodes_.push_back({kTerminalVar, kTrue, kTrue});
}

std::pair<VarId, NodeId> BddManager::fresh_var() {
  if (var_count_ >= capacity_)
    throw EvalError(EvalErrorKind::CapacityExhausted,
                    "variable capacity of " + std::to_string(capacity_) + " exhausted");
  const auto v = static_cast<VarId>(var_count_++);
  return {v, make(v, kFalse, kTrue)};
}

NodeId BddManager::literal(VarId v, bool positive) {
  return positive ? make(v, kFalse, kTrue) : make(v, kTrue, kFalse);
}

NodeId BddManager::make(VarId v, NodeId lo, NodeId hi) {
  if (lo == hi) return lo;
  const Triple key{v, lo, hi};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({v, lo, hi});
  unique_.emplace(key, id);
  return id;
}

NodeId BddManager::negate(NodeId a) {
  if (a == kFalse) return kTrue;
  if (a == kTrue) return kFalse;
  if (auto it = not_cache_.find(a); it != not_cache_.end()) return it->second;
  const Node n = nodes_[a];
  const NodeId lo = negate(n.lo);
  const NodeId hi = negate(n.hi);
  const NodeId r = make(n.var, lo, hi);
  not_cache_.emplace(a, r);
  return r;
}

NodeId BddManager::apply(BoolOp op, NodeId a, NodeId b) {
  switch (op) {
    case BoolOp::And:
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue || a == b) return a;
      break;
    case BoolOp::Or:
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse || a == b) return a;
      break;
    case BoolOp::Xor:
      if (a == b) return kFalse;
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == kTrue) return negate(b);
      if (b == kTrue) return negate(a);
      break;
  }
  if (a > b) std::swap(a, b);
  const Triple key{static_cast<std::uint32_t>(op), a, b};
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) return it->second;

  const VarId v = std::min(top_var(a), top_var(b));
  const NodeId a_lo = top_var(a) == v ? nodes_[a].lo : a;
  const NodeId a_hi = top_var(a) == v ? nodes_[a].hi : a;
  const NodeId b_lo = top_var(b) == v ? nodes_[b].lo : b;
  const NodeId b_hi = top_var(b) == v ? nodes_[b].hi : b;
  const NodeId lo = apply(op, a_lo, b_lo);
  const NodeId hi = apply(op, a_hi, b_hi);
  const NodeId r = make(v, lo, hi);
  apply_cache_.emplace(key, r);
  return r;
}

NodeId BddManager::ite(NodeId g, NodeId t, NodeId e) {
  if (g == kTrue) return t;
  if (g == kFalse) return e;
  if (t == e) return t;
  if (t == kTrue && e == kFalse) return g;
  if (t == kFalse && e == kTrue) return negate(g);
  const Triple key{g, t, e};
  if (auto it = ite_cache_.find(key); it != ite_cache_.end()) return it->second;

  const VarId v = std::min({top_var(g), top_var(t), top_var(e)});
  auto cof = [&](NodeId n, bool high) {
    if (top_var(n) != v) return n;
    return high ? nodes_[n].hi : nodes_[n].lo;
  };
  const NodeId lo = ite(cof(g, false), cof(t, false), cof(e, false));
  const NodeId hi = ite(cof(g, true), cof(t, true), cof(e, true));
  const NodeId r = make(v, lo, hi);
  ite_cache_.emplace(key, r);
  return r;
}

bool BddManager::evaluate(NodeId n, const std::vector<bool>& assignment) const {
  while (!is_const(n)) {
    const Node& node = nodes_[n];
    n = assignment.at(node.var) ? node.hi : node.lo;
  }
  return n == kTrue;
}

std::string BddManager::to_dot(NodeId root) const {
  std::ostringstream out;
  out << "digraph bdd {\n";
  out << "  n0 [label=\"0\", shape=box];\n  n1 [label=\"1\", shape=box];\n";
  std::vector<NodeId> stack{root};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    if (is_const(n) || seen[n]) continue;
    seen[n] = true;
    const Node& node = nodes_[n];
    out << "  n" << n << " [label=\"x" << node.var << "\"];\n";
    out << "  n" << n << " -> n" << node.hi << ";\n";
    out << "  n" << n << " -> n" << node.lo << " [style=dashed];\n";
    stack.push_back(node.hi);
    stack.push_back(node.lo);
  }
  out << "}\n";
  return out.str();
}

void WeightMap::set(VarId v, double w_true, double w_false) {
  if (v >= entries_.size()) entries_.resize(v + 1);
  entries_[v] = {w_true, w_false, true};
}

std::pair<double, double> WeightMap::get(VarId v) const {
  if (!has(v)) throw EvalError(EvalErrorKind::MissingWeight, "no weight for variable " + std::to_string(v));
  return {entries_[v].w_true, entries_[v].w_false};
}

double wmc(const BddManager& m, NodeId f, const WeightMap& w) {
  WmcCache cache(m, w);
  return cache(f);
}

double WmcCache::operator()(NodeId f) {
  if (f == kFalse) return 0.0;
  if (f == kTrue) return 1.0;
  if (memo_.size() < m_->node_count()) memo_.resize(m_->node_count(), std::numeric_limits<double>::quiet_NaN());
  if (!std::isnan(memo_[f])) return memo_[f];
  const auto [wt, wf] = w_->get(m_->var(f));
  const double r = wt * (*this)(m_->hi(f)) + wf * (*this)(m_->lo(f));
  memo_[f] = r;
  return r;
}

}  // namespace multippl

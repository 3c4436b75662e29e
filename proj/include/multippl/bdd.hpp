#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace multippl {

using NodeId = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr NodeId kFalse = 0;
inline constexpr NodeId kTrue = 1;

enum class BoolOp : std::uint8_t { And, Or, Xor };

/// Reduced ordered BDD store. Variables are ordered by creation; there are no
/// complement edges and nodes are never collected, so a manager should live
/// no longer than one inference run.
///
/// Not thread-safe: the unique table and operation caches are unsynchronized.
class BddManager {
 public:
  static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 20;

  explicit BddManager(std::size_t var_capacity = kDefaultCapacity);

  /// Allocates the next variable and returns it with its positive literal.
  /// Throws EvalError(CapacityExhausted) past the capacity.
  std::pair<VarId, NodeId> fresh_var();

  NodeId literal(VarId v, bool positive = true);
  NodeId apply(BoolOp op, NodeId a, NodeId b);
  NodeId conj(NodeId a, NodeId b) { return apply(BoolOp::And, a, b); }
  NodeId disj(NodeId a, NodeId b) { return apply(BoolOp::Or, a, b); }
  NodeId negate(NodeId a);
  NodeId ite(NodeId g, NodeId t, NodeId e);

  bool is_const(NodeId n) const { return n <= kTrue; }
  VarId var(NodeId n) const { return nodes_[n].var; }
  NodeId hi(NodeId n) const { return nodes_[n].hi; }
  NodeId lo(NodeId n) const { return nodes_[n].lo; }

  std::size_t var_count() const { return var_count_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Truth value under an assignment indexed by variable.
  bool evaluate(NodeId n, const std::vector<bool>& assignment) const;

  /// Graphviz rendering: solid edges are the high branch, dashed the low one.
  std::string to_dot(NodeId root) const;

 private:
  struct Node {
    VarId var;
    NodeId lo;
    NodeId hi;
  };

  struct TripleHash {
    std::size_t operator()(const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>& k) const noexcept;
  };
  using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

  NodeId make(VarId v, NodeId lo, NodeId hi);
  VarId top_var(NodeId n) const { return is_const(n) ? kTerminalVar : nodes_[n].var; }

  static constexpr VarId kTerminalVar = 0xffffffffu;

  std::size_t capacity_;
  std::size_t var_count_ = 0;
  std::vector<Node> nodes_;
  std::unordered_map<Triple, NodeId, TripleHash> unique_;
  std::unordered_map<Triple, NodeId, TripleHash> apply_cache_;
  std::unordered_map<Triple, NodeId, TripleHash> ite_cache_;
  std::unordered_map<NodeId, NodeId> not_cache_;
};

/// Literal weights per variable. Every entry is expected to satisfy
/// w_true + w_false = 1, which is what makes skipped variables neutral.
class WeightMap {
 public:
  void set(VarId v, double w_true, double w_false);
  bool has(VarId v) const { return v < entries_.size() && entries_[v].present; }
  /// Throws EvalError(MissingWeight) for an unknown variable.
  std::pair<double, double> get(VarId v) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    double w_true = 0.0;
    double w_false = 0.0;
    bool present = false;
  };
  std::vector<Entry> entries_;
};

/// Weighted model count in one memoized pass.
double wmc(const BddManager& m, NodeId f, const WeightMap& w);

/// Memoized WMC that survives across queries. Valid as long as existing
/// weight entries never change; new variables may be added freely since a
/// node only mentions variables that existed when it was built.
class WmcCache {
 public:
  WmcCache(const BddManager& m, const WeightMap& w) : m_(&m), w_(&w) {}
  double operator()(NodeId f);

 private:
  const BddManager* m_;
  const WeightMap* w_;
  std::vector<double> memo_;
};

}  // namespace multippl

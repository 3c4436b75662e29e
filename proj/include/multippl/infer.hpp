#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "multippl/bdd.hpp"
#include "multippl/rng.hpp"
#include "multippl/typecheck.hpp"
#include "multippl/value.hpp"

namespace multippl {

/// A Disc value over the current probability space: Boolean components are
/// BDD nodes, integers are one-hot vectors of nodes.
struct SymValue {
  enum class Kind { Unit, Bool, Int, Pair };
  Kind kind = Kind::Unit;
  NodeId bit = kFalse;
  std::vector<NodeId> onehot;
  std::vector<SymValue> parts;  // two entries for a pair

  static SymValue unit() { return {}; }
  static SymValue boolean(NodeId n) { return {Kind::Bool, n, {}, {}}; }
  static SymValue integer(std::vector<NodeId> bits) { return {Kind::Int, kFalse, std::move(bits), {}}; }
  static SymValue pair(SymValue a, SymValue b) { return {Kind::Pair, kFalse, {}, {std::move(a), std::move(b)}}; }
};

/// The mutable exact-inference state: a finite probability space given by
/// the allocated variables and their weights, conditioned on `accepting`.
class ExactState {
 public:
  explicit ExactState(std::size_t var_capacity = BddManager::kDefaultCapacity)
      : manager(var_capacity), wmc_(manager, weights) {}
  ExactState(const ExactState&) = delete;
  ExactState& operator=(const ExactState&) = delete;

  BddManager manager;
  WeightMap weights;
  NodeId accepting = kTrue;

  /// Fresh variable true with probability p; p outside [0,1] gives a
  /// variable that is always false.
  NodeId flip(double p);
  double mass(NodeId f) { return wmc_(f); }
  /// Probability of f given the accepting formula (0 when that has mass 0).
  double conditional(NodeId f);

 private:
  WmcCache wmc_;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t fuel = 1'000'000;
  std::size_t var_capacity = BddManager::kDefaultCapacity;
  /// Called with every intermediate Disc result; used by invariant tests.
  std::function<void(ExactState&, const SymValue&)> inspect;
};

/// Outcome of one importance-sampling run.
struct RunResult {
  double weight = 1.0;
  Value value;
  /// For exact mains: the exact conditional expectation of every flattened
  /// component of the result within this run (see Query).
  std::optional<std::vector<double>> exact_features;
};

/// Runs a checked program once. Deterministic in (program, config).
/// A Disc main is evaluated symbolically and its result crosses back through
/// an implicit exact boundary. Throws EvalError (FuelExhausted, ...).
RunResult run_once(const TypedProgram& p, const RunConfig& config);
RunResult run_once(const TypedProgram& p, std::uint64_t seed, std::uint64_t fuel = 1'000'000);

/// What to estimate from each run's value.
struct Query {
  enum class Kind { Expectation, Marginal };
  Kind kind = Kind::Expectation;
  int component = 0;

  static Query expectation() { return {}; }
  static Query marginal(int k) { return {Kind::Marginal, k}; }
};

/// Flattens a value into the real vector the query averages: bools as 0/1,
/// numbers as-is, tuples componentwise. Lists throw QueryUnsupported.
std::vector<double> query_features(const Value& v, const Query& q);

struct EstimateOptions {
  std::uint64_t seed = 0;
  std::uint64_t fuel = 1'000'000;
  unsigned jobs = 1;
  /// For exact mains, average each run's exact conditional expectation
  /// instead of its sampled value (same mean, lower variance).
  bool use_exact_features = true;
};

struct Estimate {
  std::size_t n = 0;
  std::vector<double> mean;        // empty when sum_weights == 0
  std::vector<double> std_error;   // delta-method standard error per component
  std::vector<double> unweighted;  // plain average of per-run features
  double sum_weights = 0.0;
  double ess = 0.0;
  bool defined() const { return sum_weights > 0.0; }
};

/// Self-normalized importance sampling over n runs; run i uses rng stream i.
/// Results are reduced in run order, so any job count gives the same output.
Estimate estimate(const TypedProgram& p, std::size_t n, const Query& q, const EstimateOptions& opts = {});

/// Runs n runs and hands each (index, result) to `sink` in index order.
void run_batch(const TypedProgram& p, std::size_t n, const EstimateOptions& opts,
               const std::function<void(std::size_t, const RunResult&)>& sink);

}  // namespace multippl

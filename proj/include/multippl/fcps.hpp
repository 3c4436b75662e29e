#pragma once

#include <map>
#include <utility>
#include <vector>

namespace multippl::fcps {

// Finite conditional probability spaces over outcomes {0, ..., n-1}, with
// exact (summation-based) versions of the constructions used to argue that
// the low-level engine samples the high-level semantics.

using Measure = std::vector<double>;  // mass of each outcome
using Event = std::vector<bool>;

double mass(const Measure& mu, const Event& e);

/// mu restricted to e and renormalized; the zero measure when mu(e) = 0.
Measure condition(const Measure& mu, const Event& e);

Event intersect(const Event& a, const Event& b);

/// A finitely supported distribution over (weight, outcome) pairs.
struct WeightedOutcome {
  double prob;
  double weight;
  int outcome;
};
using WeightedDist = std::vector<WeightedOutcome>;

/// E[weight * k(outcome)].
double weighted_expectation(const WeightedDist& d, const std::vector<double>& k);

/// omega <- mu; score(1[omega in E]); return omega
WeightedDist sample_then_score(const Measure& mu, const Event& e);
/// score(mu(E)); omega <- mu|E; return omega
WeightedDist score_then_sample(const Measure& mu, const Event& e);

/// x <- X(mu); omega <- mu|X^-1(x); return (x, omega)
std::map<std::pair<int, int>, double> marginal_then_conditional(const Measure& mu, const std::vector<int>& x);
/// omega <- mu; return (X omega, omega)
std::map<std::pair<int, int>, double> joint(const Measure& mu, const std::vector<int>& x);

/// Largest absolute difference between two finite maps (missing keys are 0).
double max_gap(const std::map<std::pair<int, int>, double>& a, const std::map<std::pair<int, int>, double>& b);
double max_gap(const Measure& a, const Measure& b);

}  // namespace multippl::fcps

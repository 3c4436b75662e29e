#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "multippl/bdd.hpp"
#include "multippl/fcps.hpp"

namespace multippl::testing {

/// A finite conditional probability space read off a small BDD world: the
/// outcomes are the assignments to up to four weighted variables, mu is the
/// product of literal weights, E the models of a random formula, X the joint
/// value of two random formulas and F a further random event.
struct RandomSpace {
  fcps::Measure mu;
  fcps::Event e;
  fcps::Event f;
  std::vector<int> x;
  std::vector<double> k;  // a random test function on outcomes
};

class SpaceGen {
 public:
  explicit SpaceGen(std::uint64_t seed) : rng_(seed) {}

  RandomSpace next() {
    const int vars = std::uniform_int_distribution<int>(1, 4)(rng_);
    BddManager m;
    WeightMap w;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<NodeId> lits;
    for (int v = 0; v < vars; ++v) {
      const auto [id, lit] = m.fresh_var();
      // some coins are certain, which makes zero-mass events likely
      const double p = coin(0.15) ? (coin(0.5) ? 0.0 : 1.0) : u(rng_);
      w.set(id, p, 1.0 - p);
      lits.push_back(lit);
    }
    const NodeId alpha = formula(m, lits, 3);
    const NodeId beta = formula(m, lits, 3);
    const NodeId x0 = formula(m, lits, 2);
    const NodeId x1 = formula(m, lits, 2);

    RandomSpace s;
    const std::size_t outcomes = std::size_t{1} << vars;
    for (std::size_t r = 0; r < outcomes; ++r) {
      std::vector<bool> assignment(static_cast<std::size_t>(vars));
      NodeId minterm = kTrue;
      for (int v = 0; v < vars; ++v) {
        assignment[static_cast<std::size_t>(v)] = (r >> v) & 1u;
        minterm = m.conj(minterm, assignment[static_cast<std::size_t>(v)] ? lits[static_cast<std::size_t>(v)]
                                                                           : m.negate(lits[static_cast<std::size_t>(v)]));
      }
      s.mu.push_back(wmc(m, minterm, w));
      s.e.push_back(m.evaluate(alpha, assignment));
      s.f.push_back(m.evaluate(beta, assignment));
      s.x.push_back(2 * m.evaluate(x0, assignment) + m.evaluate(x1, assignment));
      s.k.push_back(std::uniform_real_distribution<double>(-5.0, 5.0)(rng_));
    }
    return s;
  }

  std::vector<double> test_function(std::size_t outcomes) {
    std::vector<double> k(outcomes);
    for (auto& v : k) v = std::uniform_real_distribution<double>(-5.0, 5.0)(rng_);
    return k;
  }

 private:
  std::mt19937_64 rng_;

  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  NodeId formula(BddManager& m, const std::vector<NodeId>& lits, int depth) {
    if (depth == 0 || coin(0.3)) {
      const NodeId lit = lits[std::uniform_int_distribution<std::size_t>(0, lits.size() - 1)(rng_)];
      return coin(0.3) ? m.negate(lit) : lit;
    }
    const NodeId a = formula(m, lits, depth - 1), b = formula(m, lits, depth - 1);
    return coin(0.5) ? m.conj(a, b) : m.disj(a, b);
  }
};

struct LemmaGaps {
  double swap_order = 0.0;     // sample-then-score vs score-then-sample
  double joint_draw = 0.0;     // marginal-then-conditional vs joint
  double iterated_cond = 0.0;  // mu|E|F vs mu|(E and F)
};

/// Runs the three lemma checks on `spaces` random spaces; swap_order uses ten
/// test functions per space.
inline LemmaGaps lemma_campaign(std::uint64_t seed, int spaces) {
  SpaceGen gen(seed);
  LemmaGaps gaps;
  for (int i = 0; i < spaces; ++i) {
    const RandomSpace s = gen.next();
    const auto lhs = fcps::sample_then_score(s.mu, s.e);
    const auto rhs = fcps::score_then_sample(s.mu, s.e);
    for (int t = 0; t < 10; ++t) {
      const auto k = t == 0 ? s.k : gen.test_function(s.mu.size());
      gaps.swap_order =
          std::max(gaps.swap_order, std::fabs(fcps::weighted_expectation(lhs, k) - fcps::weighted_expectation(rhs, k)));
    }
    const fcps::Measure given_e = fcps::condition(s.mu, s.e);
    gaps.joint_draw = std::max(gaps.joint_draw, fcps::max_gap(fcps::marginal_then_conditional(given_e, s.x),
                                                              fcps::joint(given_e, s.x)));
    // conditioning on a null event gives the zero measure on both sides
    const fcps::Measure twice = fcps::condition(given_e, s.f);
    const fcps::Measure once = fcps::condition(s.mu, fcps::intersect(s.e, s.f));
    gaps.iterated_cond = std::max(gaps.iterated_cond, fcps::max_gap(twice, once));
  }
  return gaps;
}

}  // namespace multippl::testing

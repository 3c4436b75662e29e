#include "multippl/fcps.hpp"

#include <algorithm>
#include <cmath>

namespace multippl::fcps {

double mass(const Measure& mu, const Event& e) {
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (e[i]) total += mu[i];
  return total;
}

Measure condition(const Measure& mu, const Event& e) {
  const double z = mass(mu, e);
  Measure out(mu.size(), 0.0);
  if (z <= 0.0) return out;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (e[i]) out[i] = mu[i] / z;
  return out;
}

Event intersect(const Event& a, const Event& b) {
  Event out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

double weighted_expectation(const WeightedDist& d, const std::vector<double>& k) {
  double total = 0.0;
  for (const auto& w : d) total += w.prob * w.weight * k[static_cast<std::size_t>(w.outcome)];
  return total;
}

WeightedDist sample_then_score(const Measure& mu, const Event& e) {
  WeightedDist out;
  for (std::size_t i = 0; i < mu.size(); ++i) out.push_back({mu[i], e[i] ? 1.0 : 0.0, static_cast<int>(i)});
  return out;
}

WeightedDist score_then_sample(const Measure& mu, const Event& e) {
  const double z = mass(mu, e);
  const Measure cond = condition(mu, e);
  WeightedDist out;
  for (std::size_t i = 0; i < mu.size(); ++i) out.push_back({cond[i], z, static_cast<int>(i)});
  return out;
}

std::map<std::pair<int, int>, double> marginal_then_conditional(const Measure& mu, const std::vector<int>& x) {
  std::map<int, double> marginal;
  for (std::size_t i = 0; i < mu.size(); ++i) marginal[x[i]] += mu[i];
  std::map<std::pair<int, int>, double> out;
  for (const auto& [label, p] : marginal) {
    Event pre(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) pre[i] = x[i] == label;
    const Measure cond = condition(mu, pre);
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (p * cond[i] > 0.0) out[{label, static_cast<int>(i)}] += p * cond[i];
  }
  return out;
}

std::map<std::pair<int, int>, double> joint(const Measure& mu, const std::vector<int>& x) {
  std::map<std::pair<int, int>, double> out;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) out[{x[i], static_cast<int>(i)}] += mu[i];
  return out;
}

double max_gap(const std::map<std::pair<int, int>, double>& a, const std::map<std::pair<int, int>, double>& b) {
  double gap = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    gap = std::max(gap, std::fabs(v - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) gap = std::max(gap, std::fabs(v));
  return gap;
}

double max_gap(const Measure& a, const Measure& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::fabs(a[i] - b[i]));
  return gap;
}

}  // namespace multippl::fcps

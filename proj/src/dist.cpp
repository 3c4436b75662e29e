#include "multippl/dist.hpp"

#include <algorithm>
#include <cmath>

namespace multippl {
namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

// Inversion is exact but exp(-rate) underflows for large rates; Poisson laws
// are closed under sums, so large rates are split in halves.
double pois_inversion(double rate, Rng& rng) {
  if (rate > 500.0) return pois_inversion(rate / 2, rng) + pois_inversion(rate / 2, rng);
  const double u = rng.uniform();
  double k = 0.0;
  double pmf = std::exp(-rate);
  double cdf = pmf;
  while (u >= cdf && pmf > 0.0) {
    k += 1.0;
    pmf *= rate / k;
    cdf += pmf;
  }
  return k;
}

}  // namespace

bool draw_flip(double p, Rng& rng) {
  if (!in_unit(p)) return false;
  return rng.uniform() < p;
}

double draw_unif(double a, double b, Rng& rng) {
  if (!(a <= b)) return std::min(a, b);
  return a + (b - a) * rng.uniform();
}

double draw_pois(double rate, Rng& rng) {
  if (!(rate > 0.0) || !std::isfinite(rate)) return 0.0;
  return pois_inversion(rate, rng);
}

std::vector<double> normalize_categorical(const std::vector<double>& weights) {
  std::vector<double> out(weights.size(), 0.0);
  double total = 0.0;
  bool ok = true;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) ok = false;
    total += w;
  }
  if (!ok || !(total > 0.0) || !std::isfinite(total)) {
    if (!out.empty()) out[0] = 1.0;
    return out;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / total;
  return out;
}

int draw_discrete(const std::vector<double>& weights, Rng& rng) {
  const auto probs = normalize_categorical(weights);
  const double u = rng.uniform();
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;
}

double score_flip(double p, bool observed) {
  if (!in_unit(p)) return observed ? 0.0 : 1.0;
  return observed ? p : 1.0 - p;
}

double score_unif(double a, double b, double observed) {
  if (!(a < b)) return observed == std::min(a, b) ? 1.0 : 0.0;
  return observed >= a && observed <= b ? 1.0 / (b - a) : 0.0;
}

double score_pois(double rate, double observed) {
  const double k = std::round(observed);
  if (std::fabs(observed - k) > 1e-9 || k < 0.0) return 0.0;
  if (!(rate > 0.0)) return k == 0.0 ? 1.0 : 0.0;
  return std::exp(-rate + k * std::log(rate) - std::lgamma(k + 1.0));
}

}  // namespace multippl

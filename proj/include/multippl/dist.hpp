#pragma once

#include <vector>

#include "multippl/rng.hpp"

namespace multippl {

// Primitive distributions with their degenerate-parameter fallbacks:
// flip outside [0,1] is always false, unif with a > b is the point min(a,b),
// pois with a non-positive rate is the point 0.

bool draw_flip(double p, Rng& rng);
double draw_unif(double a, double b, Rng& rng);
double draw_pois(double rate, Rng& rng);
/// Index drawn proportionally to the weights; see normalize_categorical.
int draw_discrete(const std::vector<double>& weights, Rng& rng);

/// Probabilities of a categorical given raw weights. Negative or non-finite
/// weights, or a non-positive total, give the point mass on index 0.
std::vector<double> normalize_categorical(const std::vector<double>& weights);

double score_flip(double p, bool observed);
double score_unif(double a, double b, double observed);
double score_pois(double rate, double observed);

}  // namespace multippl

#pragma once

#include <cstdint>
#include <map>

#include "multippl/infer.hpp"
#include "multippl/typecheck.hpp"
#include "multippl/value.hpp"

namespace multippl {

/// Exact normalized distribution over return values, with the total
/// unnormalized mass Z. When Z == 0 the map is empty.
struct Posterior {
  std::map<Value, double> probs;
  double z = 0.0;
  std::size_t worlds = 0;

  double prob(const Value& v) const;
  /// Expected query features under the posterior.
  std::vector<double> expectation(const Query& q) const;
};

inline constexpr std::size_t kWorldLimit = std::size_t{1} << 20;

/// Exhaustive enumeration of the high-level semantics, where boundaries are
/// identities and observe multiplies by an indicator. Throws
/// EvalError(NotEnumerable) on unif/pois draws, loops or lists, and
/// EvalError(WorldLimitExceeded) beyond `world_limit` worlds.
Posterior enumerate(const TypedProgram& p, std::size_t world_limit = kWorldLimit);

struct HighLevelEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
  double sum_weights = 0.0;
};

/// Self-normalized importance sampling of the high-level semantics: every
/// distribution is sampled eagerly and each run carries its score product.
HighLevelEstimate highlevel_sample(const TypedProgram& p, std::size_t n, std::uint64_t seed, const Query& q,
                                   std::uint64_t fuel = 1'000'000);

}  // namespace multippl

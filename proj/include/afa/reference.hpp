#pragma once

#include <vector>

#include "afa/coalition_game.hpp"
#include "afa/solver.hpp"

namespace afa {

// Direct, kernel-free implementations of the named attributions. Each one
// is an independent cross-check for the corresponding kernel route.

/// Subset-form Shapley value with per-size factorial weights.
Attribution shapley(const CoalitionGame& game);

/// Averages marginal contributions over all n! orderings. n <= 9.
Attribution shapley_permutation_oracle(const CoalitionGame& game);

/// Equal Surplus: phi_j = v({j}) + (v(N) - v(empty) - sum_k v({k})) / n.
Attribution es(const CoalitionGame& game);

/// FESP exactly as printed:
/// phi_j = w*(v({j}) - v(empty)) + (1-w)*(v(empty) - v(N\{j})).
/// Not efficient in general; the efficiency gap is recorded.
Attribution fesp_raw(const CoalitionGame& game, double w);

/// Efficient attribution minimizing the unweighted sum of squared excesses
/// over all nonempty coalitions, solved numerically via its KKT system.
Attribution ls_prenucleolus_oracle(const CoalitionGame& game);

/// phi_j = beta_j * (instance_j - means_j).
Attribution linear_model_attribution(double beta0,
                                     const std::vector<double>& beta,
                                     const std::vector<double>& means,
                                     const std::vector<double>& instance);

}  // namespace afa

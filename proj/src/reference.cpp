#include "afa/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "afa/errors.hpp"

namespace afa {

namespace {

double phi_sum(const std::vector<double>& phi) {
  return std::accumulate(phi.begin(), phi.end(), 0.0);
}

Attribution finish(int n, std::vector<double> phi, std::string method,
                   double gap) {
  Attribution out;
  out.n = n;
  out.phi = std::move(phi);
  out.method = std::move(method);
  out.efficiency_gap = phi_sum(out.phi) - gap;
  return out;
}

}  // namespace

Attribution shapley(const CoalitionGame& game) {
  const int n = game.n();
  // weight for |S| = s is s!(n-1-s)!/n! = 1 / (n * C(n-1, s))
  std::vector<double> size_weight(n);
  for (int s = 0; s < n; ++s) size_weight[s] = 1.0 / (n * binomial(n - 1, s));

  std::vector<double> phi(n, 0.0);
  for (std::uint32_t m = 0; m < game.num_coalitions(); ++m) {
    const int s = std::popcount(m);
    for (int j = 0; j < n; ++j) {
      if (m >> j & 1u) continue;
      phi[j] += size_weight[s] * (game.value(m | (1u << j)) - game.value(m));
    }
  }
  return finish(n, std::move(phi), "shapley", grand_gap(game));
}

Attribution shapley_permutation_oracle(const CoalitionGame& game) {
  const int n = game.n();
  if (n > 9) {
    throw NTooLargeForPermutations("n = " + std::to_string(n) +
                                   ", permutation enumeration capped at 9");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> phi(n, 0.0);
  long count = 0;
  do {
    std::uint32_t mask = 0;
    for (int j : order) {
      const std::uint32_t next = mask | (1u << j);
      phi[j] += game.value(next) - game.value(mask);
      mask = next;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));

  for (double& p : phi) p /= static_cast<double>(count);
  return finish(n, std::move(phi), "shapley-permutation", grand_gap(game));
}

Attribution es(const CoalitionGame& game) {
  const int n = game.n();
  const double gap = grand_gap(game);
  double singleton_sum = 0.0;
  for (int j = 0; j < n; ++j) singleton_sum += game.value(1u << j);

  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j)
    phi[j] = game.value(1u << j) + (gap - singleton_sum) / n;
  return finish(n, std::move(phi), "es", gap);
}

Attribution fesp_raw(const CoalitionGame& game, double w) {
  if (!(w > 0.0 && w < 1.0))
    throw WeightOutOfRange("w = " + std::to_string(w) + ", expected (0,1)");
  const int n = game.n();
  const double v0 = game.empty_value();
  const std::uint32_t full = game.full_mask();

  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j) {
    phi[j] = w * (game.value(1u << j) - v0) +
             (1.0 - w) * (v0 - game.value(full & ~(1u << j)));
  }
  return finish(n, std::move(phi), "fesp-raw", grand_gap(game));
}

Attribution ls_prenucleolus_oracle(const CoalitionGame& game) {
  const int n = game.n();
  const double gap = grand_gap(game);
  if (n == 1) return finish(1, {gap}, "lsprenucleolus", gap);

  // Unit weight on every nonempty coalition, solved through the same KKT
  // machinery as the weighted oracle.
  SymmetricKernel unit;
  unit.n = n;
  unit.w.assign(static_cast<std::size_t>(n) + 1, 1.0);
  unit.w[0] = 0.0;
  unit.name = "unit";

  Attribution out = wls_oracle_constrained(game, unit).first;
  out.method = "lsprenucleolus";
  return out;
}

Attribution linear_model_attribution(double beta0,
                                     const std::vector<double>& beta,
                                     const std::vector<double>& means,
                                     const std::vector<double>& instance) {
  (void)beta0;  // shifts both v(N) and v(empty); no effect on the attribution
  const std::size_t n = beta.size();
  if (means.size() != n || instance.size() != n) {
    throw DimensionMismatch("beta/means/instance lengths " +
                            std::to_string(n) + "/" + std::to_string(means.size()) +
                            "/" + std::to_string(instance.size()));
  }
  std::vector<double> phi(n);
  double gap = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    phi[j] = beta[j] * (instance[j] - means[j]);
    gap += phi[j];
  }
  return finish(static_cast<int>(n), std::move(phi), "lm", gap);
}

}  // namespace afa

#include <cmath>
#include <random>

#include "doctest.h"

#include "afa/errors.hpp"
#include "afa/kernels.hpp"
#include "afa/reference.hpp"
#include "afa/solver.hpp"
#include "test_games.hpp"

using namespace afa;
using namespace afa_test;

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

CoalitionGame random_game(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(1u << n);
  for (double& v : values) v = dist(rng);
  return CoalitionGame(n, std::move(values));
}

}  // namespace

TEST_CASE("shapley on the micro games") {
  const auto att = shapley(g3());
  CHECK(att.phi[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(att.phi[1] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(att.phi[2] == doctest::Approx(1.0 / 6).epsilon(1e-12));

  const auto add = shapley(gadd());
  CHECK(add.phi[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(add.phi[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(add.phi[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("shapley gives zero to a dummy feature") {
  // Feature 2 contributes nothing to any coalition.
  std::vector<double> values(8);
  for (unsigned m = 0; m < 8; ++m) {
    const unsigned without = m & ~2u;
    values[m] = (without & 1u ? 1.5 : 0.0) + (without & 4u ? -0.5 : 0.0);
  }
  const auto att = shapley(make_game(3, std::move(values)));
  CHECK(att.phi[1] == 0.0);
}

TEST_CASE("permutation oracle") {
  const auto att3 = shapley_permutation_oracle(g3());
  CHECK(att3.phi[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));

  const auto att2 = shapley_permutation_oracle(g2());
  CHECK(att2.phi[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(att2.phi[1] == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      shapley_permutation_oracle(make_game(10, std::vector<double>(1 << 10, 0.0))),
      NTooLargeForPermutations);
}

TEST_CASE("shapley equals the permutation enumeration") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 6; ++n)
    for (int t = 0; t < 20; ++t) {
      const CoalitionGame g = random_game(rng, n);
      CHECK(max_diff(shapley(g).phi, shapley_permutation_oracle(g).phi) < 1e-10);
    }
}

TEST_CASE("equal surplus") {
  const auto att2 = es(g2());
  CHECK(att2.phi[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(att2.phi[1] == doctest::Approx(4.0).epsilon(1e-12));

  const auto att3 = es(g3());
  for (int j = 0; j < 3; ++j)
    CHECK(att3.phi[j] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const auto add = es(gadd());
  CHECK(add.phi[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(add.phi[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fesp as printed") {
  const auto att = fesp_raw(g3(), 0.5);
  CHECK(att.phi[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(att.phi[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(att.phi[2] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(att.efficiency_gap == doctest::Approx(-2.0).epsilon(1e-12));

  // gadd: v({j}) - v(0) = a_j and v(0) - v(N\{j}) = a_j - 6, so at w = 1/2
  // the printed formula yields a_j - 3 and misses efficiency by -9.
  const auto add = fesp_raw(gadd(), 0.5);
  CHECK(add.phi[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(add.phi[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(add.phi[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(add.efficiency_gap == doctest::Approx(-9.0).epsilon(1e-12));

  CHECK_THROWS_AS(fesp_raw(g3(), 1.5), WeightOutOfRange);
}

TEST_CASE("fesp kernel route differs from the printed formula by a constant") {
  std::mt19937_64 rng(13);
  for (int n = 3; n <= 6; ++n)
    for (double w : {0.2, 0.5, 0.8})
      for (int t = 0; t < 10; ++t) {
        const CoalitionGame g = random_game(rng, n);
        const double tol = default_tolerance(g, 1e-8);
        const auto via_kernel = solve_constrained(g, fesp_kernel(n, w));
        const auto raw = fesp_raw(g, w);
        const double c0 = via_kernel.phi[0] - raw.phi[0];
        double raw_sum = 0;
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs(via_kernel.phi[j] - raw.phi[j] - c0) < tol);
          raw_sum += raw.phi[j];
        }
        CHECK(c0 == doctest::Approx((grand_gap(g) - raw_sum) / n).epsilon(1e-8));
      }
}

TEST_CASE("LS prenucleolus") {
  const auto att = ls_prenucleolus_oracle(g3());
  CHECK(att.phi[0] == doctest::Approx(2.0 / 3).epsilon(1e-10));
  CHECK(att.phi[1] == doctest::Approx(1.0 / 6).epsilon(1e-10));
  CHECK(att.phi[2] == doctest::Approx(1.0 / 6).epsilon(1e-10));

  const auto add = ls_prenucleolus_oracle(gadd());
  CHECK(add.phi[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(add.phi[2] == doctest::Approx(3.0).epsilon(1e-10));

  const auto flat = ls_prenucleolus_oracle(make_game(3, std::vector<double>(8, 4.2)));
  for (int j = 0; j < 3; ++j) CHECK(std::abs(flat.phi[j]) < 1e-12);
}

TEST_CASE("kernel routes reproduce the named attributions") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 6; ++n)
    for (int t = 0; t < 15; ++t) {
      const CoalitionGame g = random_game(rng, n);
      const double tol = default_tolerance(g, 1e-8);
      CHECK(max_diff(solve_constrained(g, shap_kernel(n)).phi, shapley(g).phi) < tol);
      CHECK(max_diff(solve_constrained(g, shap_kernel_original(n)).phi, shapley(g).phi) < tol);
      CHECK(max_diff(solve_constrained(g, es_kernel(n)).phi, es(g).phi) < tol);
      CHECK(max_diff(solve_constrained(g, uniform_kernel(n)).phi,
                     ls_prenucleolus_oracle(g).phi) < tol);
      if (n <= 3)
        CHECK(max_diff(shapley(g).phi, ls_prenucleolus_oracle(g).phi) < tol);
    }
}

TEST_CASE("linear model attribution") {
  const auto att = linear_model_attribution(1.0, {2, 3}, {0.5, 1.0}, {1.0, 2.0});
  CHECK(att.phi[0] == 1.0);
  CHECK(att.phi[1] == 3.0);

  const auto zero_beta = linear_model_attribution(5.0, {0, 0}, {0.5, 1.0}, {1.0, 2.0});
  CHECK(zero_beta.phi[0] == 0.0);
  CHECK(zero_beta.phi[1] == 0.0);

  const auto at_mean = linear_model_attribution(1.0, {2, 3}, {1.0, 2.0}, {1.0, 2.0});
  CHECK(at_mean.phi[0] == 0.0);
  CHECK(at_mean.phi[1] == 0.0);

  CHECK_THROWS_AS(linear_model_attribution(0.0, {1, 2}, {0.0}, {1.0, 2.0}),
                  DimensionMismatch);
}

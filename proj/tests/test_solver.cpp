#include <cmath>
#include <random>

#include "doctest.h"

#include "afa/errors.hpp"
#include "afa/kernels.hpp"
#include "afa/solver.hpp"
#include "test_games.hpp"

using namespace afa;
using namespace afa_test;

namespace {

SymmetricKernel raw_kernel(int n, std::vector<double> sizes) {
  SymmetricKernel k;
  k.n = n;
  k.w.assign(n + 1, 0.0);
  for (int s = 1; s <= n; ++s) k.w[s] = sizes[s - 1];
  k.name = "raw";
  return k;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("constrained closed form on the micro games") {
  const auto shap3 = solve_constrained(g3(), shap_kernel(3));
  CHECK(shap3.phi[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(shap3.phi[1] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(shap3.phi[2] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(std::abs(shap3.efficiency_gap) < 1e-12);

  const auto es3 = solve_constrained(g3(), es_kernel(3));
  for (int j = 0; j < 3; ++j)
    CHECK(es3.phi[j] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const auto lin = solve_constrained(gadd(), linear_kernel(3));
  CHECK(lin.phi[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lin.phi[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lin.phi[2] == doctest::Approx(3.0).epsilon(1e-12));

  // fesp(3, 0.5) is proportional to the uniform kernel.
  const auto fesp3 = solve_constrained(g3(), fesp_kernel(3, 0.5));
  CHECK(fesp3.phi[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(fesp3.phi[1] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(fesp3.phi[2] == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("constrained n=1 ignores the kernel") {
  const CoalitionGame g = make_game(1, {2, 7});
  const auto att = solve_constrained(g, raw_kernel(1, {0.0}));
  CHECK(att.phi.size() == 1);
  CHECK(att.phi[0] == 5);
}

TEST_CASE("constrained errors") {
  CHECK_THROWS_AS(solve_constrained(g3(), shap_kernel(4)), DimensionMismatch);
  CHECK_THROWS_AS(solve_constrained(g3(), raw_kernel(3, {0, 0, 1})),
                  DegenerateKernel);
}

TEST_CASE("unconstrained closed form solves the normal equations") {
  const auto [att, diag] = solve_unconstrained(g2(), raw_kernel(2, {1, 1}));
  CHECK(att.phi[0] == doctest::Approx(5.0 / 3).epsilon(1e-12));
  CHECK(att.phi[1] == doctest::Approx(11.0 / 3).epsilon(1e-12));
  CHECK(att.phi[0] + att.phi[1] == doctest::Approx(16.0 / 3).epsilon(1e-12));
  CHECK(att.efficiency_gap == doctest::Approx(16.0 / 3 - 6).epsilon(1e-12));
  CHECK(diag.A == doctest::Approx(2.0));
  CHECK(diag.B == doctest::Approx(1.0));
  CHECK(diag.T == doctest::Approx(16.0 / 3).epsilon(1e-12));
}

TEST_CASE("unconstrained singular when weight sits only on the grand coalition") {
  CHECK_THROWS_AS(solve_unconstrained(g3(), raw_kernel(3, {0, 0, 1})),
                  SingularSystem);
  CHECK_THROWS_AS(wls_oracle_unconstrained(g3(), raw_kernel(3, {0, 0, 1})),
                  SingularSystem);
}

TEST_CASE("heavy grand-coalition weight approaches the constrained solution") {
  SymmetricKernel k = uniform_kernel(3);
  k.w[3] = 1e6;
  const auto uc = solve_unconstrained(g3(), k).first;
  const auto con = solve_constrained(g3(), uniform_kernel(3));
  CHECK(max_diff(uc.phi, con.phi) < 1e-4);
}

TEST_CASE("constrained oracle on the micro games") {
  const auto uni = wls_oracle_constrained(g3(), uniform_kernel(3)).first;
  CHECK(uni.phi[0] == doctest::Approx(2.0 / 3).epsilon(1e-10));
  CHECK(uni.phi[1] == doctest::Approx(1.0 / 6).epsilon(1e-10));
  CHECK(uni.phi[2] == doctest::Approx(1.0 / 6).epsilon(1e-10));

  const auto add = wls_oracle_constrained(gadd(), concave_kernel(3)).first;
  CHECK(add.phi[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(add.phi[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(add.phi[2] == doctest::Approx(3.0).epsilon(1e-10));

  const auto es2 = wls_oracle_constrained(g2(), es_kernel(2)).first;
  CHECK(es2.phi[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(es2.phi[1] == doctest::Approx(4.0).epsilon(1e-10));

  CHECK_THROWS_AS(wls_oracle_constrained(g3(), raw_kernel(3, {0, 0, 1})),
                  DegenerateKernel);
}

TEST_CASE("unconstrained oracle on G2") {
  const auto [att, diag] = wls_oracle_unconstrained(g2(), raw_kernel(2, {1, 1}));
  CHECK(att.phi[0] == doctest::Approx(5.0 / 3).epsilon(1e-10));
  CHECK(att.phi[1] == doctest::Approx(11.0 / 3).epsilon(1e-10));

  const auto fit = wls_oracle_unconstrained(gadd(), simplified_exp_kernel(3)).first;
  CHECK(fit.phi[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.phi[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.phi[2] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("closed forms match oracles on random games") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> values(1u << n);
      for (double& v : values) v = dist(rng);
      const CoalitionGame game(n, std::move(values));
      const double tol = default_tolerance(game, 1e-8);

      std::vector<SymmetricKernel> kernels = {
          shap_kernel(n), shap_kernel_original(n), es_kernel(n),
          uniform_kernel(n), linear_kernel(n), simplified_exp_kernel(n),
          concave_kernel(n)};
      if (n >= 3) kernels.push_back(fesp_kernel(n, 0.3));
      for (const auto& k : kernels) {
        CHECK(max_diff(solve_constrained(game, k).phi,
                       wls_oracle_constrained(game, k).first.phi) < tol);
        CHECK(max_diff(solve_unconstrained(game, k).first.phi,
                       wls_oracle_unconstrained(game, k).first.phi) < tol);
      }

      // Scale invariance covers the unnormalized custom-kernel case too.
      const auto base = solve_constrained(game, concave_kernel(n));
      for (double c : {1e-6, 3.0, 1e6}) {
        CHECK(max_diff(solve_constrained(game, scale_kernel(concave_kernel(n), c)).phi,
                       base.phi) < tol);
      }
    }
  }
}

TEST_CASE("diagnostics invariant: A >= B >= 0 and A - B > 0") {
  for (int n = 2; n <= 6; ++n) {
    std::vector<SymmetricKernel> kernels = {shap_kernel(n), uniform_kernel(n),
                                            linear_kernel(n)};
    const CoalitionGame game = make_game(n, std::vector<double>(1u << n, 1.0));
    for (const auto& k : kernels) {
      const auto diag = solve_unconstrained(game, k).second;
      CHECK(diag.A >= diag.B);
      CHECK(diag.B >= 0);
      CHECK(diag.A - diag.B > 0);
    }
  }
}

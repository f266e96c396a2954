#include "afa/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "afa/coalition_game.hpp"
#include "afa/errors.hpp"
#include "afa/kernels.hpp"
#include "afa/model_games.hpp"
#include "afa/reference.hpp"
#include "afa/solver.hpp"

namespace afa {

namespace {

using Rng = std::mt19937_64;

struct Tracker {
  InvariantResult res;

  explicit Tracker(std::string name) {
    res.name = std::move(name);
    res.passed = true;
  }
  void check(double dev, double tol) {
    ++res.checks;
    res.worst_deviation = std::max(res.worst_deviation, dev);
    if (!(dev <= tol)) res.passed = false;
  }
};

CoalitionGame random_game(Rng& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(std::size_t{1} << n);
  for (double& v : values) v = dist(rng);
  return CoalitionGame(n, std::move(values));
}

CoalitionGame random_additive_game(Rng& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double v0 = dist(rng);
  std::vector<double> a(n);
  for (double& x : a) x = dist(rng);
  std::vector<double> values(std::size_t{1} << n);
  for (std::uint32_t m = 0; m < values.size(); ++m) {
    double v = v0;
    for (int j = 0; j < n; ++j)
      if (m >> j & 1u) v += a[j];
    values[m] = v;
  }
  return CoalitionGame(n, std::move(values));
}

std::vector<SymmetricKernel> builtin_kernels(int n) {
  std::vector<SymmetricKernel> ks = {
      shap_kernel(n),    shap_kernel_original(n), es_kernel(n),
      uniform_kernel(n), linear_kernel(n),        simplified_exp_kernel(n),
      exp_kernel(n, 1.5), concave_kernel(n)};
  if (n >= 3) ks.push_back(fesp_kernel(n, 0.5));
  return ks;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double pair_coefficient(const SymmetricKernel& k) {
  // sum over S not containing a fixed pair of pi(S u {i}), i.e. A - B.
  double c = 0.0;
  for (int s = 1; s <= k.n - 1; ++s) c += binomial(k.n - 2, s - 1) * k.w[s];
  return c;
}

Dataset random_dataset(Rng& rng, int n, int t) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::vector<double>> rows(t, std::vector<double>(n));
  for (auto& row : rows)
    for (double& x : row) x = dist(rng);
  return Dataset(std::move(rows));
}

LinearModel random_linear(Rng& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  LinearModel m;
  m.beta0 = dist(rng);
  m.beta.resize(n);
  for (double& b : m.beta) b = dist(rng);
  return m;
}

AdditiveModel random_additive_model(Rng& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 4);
  AdditiveModel m;
  m.terms.resize(n);
  for (auto& term : m.terms) {
    term.resize(deg(rng));
    for (double& c : term) c = dist(rng);
  }
  return m;
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(const VerifyOptions& opts) {
  if (opts.n_max < 2 || opts.n_max > 8)
    throw NOutOfRange("n_max = " + std::to_string(opts.n_max) + ", expected 2..8");
  if (opts.trials < 1)
    throw NOutOfRange("trials = " + std::to_string(opts.trials));

  Rng rng(opts.seed);
  const double tb = opts.tol_base;

  Tracker s1("solver/closed-form-equals-oracle");
  Tracker s2("solver/efficiency");
  Tracker s3("solver/grand-size-insensitivity");
  Tracker s4("solver/kernel-scale-invariance");
  Tracker s5("solver/symmetric-features");
  Tracker s6("solver/additive-coincidence");
  Tracker s7("solver/pairwise-difference-formula");
  Tracker s8("solver/small-n-collapse");
  Tracker s9("solver/unconstrained-to-constrained-limit");
  Tracker r1("reference/kernel-shap-equivalence");
  Tracker r2("reference/shapley-matches-permutations");
  Tracker r3("reference/es-equivalence");
  Tracker r4("reference/fesp-shift-relation");
  Tracker r5("reference/ls-prenucleolus-equivalence");
  Tracker r6("reference/small-n-shapley-prenucleolus");
  Tracker m1("models/extreme-coalitions-exact");
  Tracker m2("models/additive-model-gives-additive-game");
  Tracker m3("models/linear-decomposition");
  Tracker m4("models/linear-model-kernel-coincidence");
  Tracker m5("models/interaction-model-non-additive");

  for (int n = 2; n <= opts.n_max; ++n) {
    const auto kernels = builtin_kernels(n);
    for (int trial = 0; trial < opts.trials; ++trial) {
      const CoalitionGame game = random_game(rng, n);
      const double tol = default_tolerance(game, tb);
      const double gap = grand_gap(game);
      const double eff_tol = 1e-9 * std::max(1.0, std::abs(gap));

      std::vector<Attribution> per_kernel;
      per_kernel.reserve(kernels.size());
      for (const auto& k : kernels) {
        const Attribution closed = solve_constrained(game, k);
        per_kernel.push_back(closed);

        s1.check(max_abs_diff(closed.phi, wls_oracle_constrained(game, k).first.phi), tol);
        const auto [uc, diag] = solve_unconstrained(game, k);
        s1.check(max_abs_diff(uc.phi, wls_oracle_unconstrained(game, k).first.phi), tol);

        double phi_sum = 0.0;
        for (double p : closed.phi) phi_sum += p;
        s2.check(std::abs(phi_sum - gap), eff_tol);

        for (double wn : {0.0, 1.0, 1e6}) {
          SymmetricKernel kk = k;
          kk.w[n] = wn;
          s3.check(max_abs_diff(solve_constrained(game, kk).phi, closed.phi), tol);
        }

        for (double c : {1e-6, 3.0, 1e6}) {
          const SymmetricKernel sk = scale_kernel(k, c);
          s4.check(max_abs_diff(solve_constrained(game, sk).phi, closed.phi), tol);
          s4.check(max_abs_diff(solve_unconstrained(game, sk).first.phi, uc.phi), tol);
        }

        // phi_i - phi_j against the explicit pairwise-difference expression,
        // scaled by the pair coefficient A - B.
        const double amb = pair_coefficient(k);
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            double rhs = 0.0;
            const std::uint32_t pair = (1u << i) | (1u << j);
            for (std::uint32_t m = 0; m < game.num_coalitions(); ++m) {
              if (m & pair) continue;
              rhs += weight_of(k, Coalition{m | (1u << i)}) * game.value(m | (1u << i));
              rhs -= weight_of(k, Coalition{m | (1u << j)}) * game.value(m | (1u << j));
            }
            s7.check(std::abs(closed.phi[i] - closed.phi[j] - rhs / amb), tol);
          }
        }
      }

      // Symmetrize a random feature pair and require equal attributions.
      {
        std::uniform_int_distribution<int> pick(0, n - 1);
        int i = pick(rng), j = pick(rng);
        if (i == j) j = (j + 1) % n;
        std::vector<double> values = game.values();
        const std::uint32_t pair = (1u << i) | (1u << j);
        for (std::uint32_t m = 0; m < values.size(); ++m) {
          if (m & pair) continue;
          values[m | (1u << j)] = values[m | (1u << i)];
        }
        const CoalitionGame sym(n, std::move(values));
        const double sym_tol = default_tolerance(sym, tb);
        for (const auto& k : kernels) {
          const Attribution a = solve_constrained(sym, k);
          s5.check(std::abs(a.phi[i] - a.phi[j]), sym_tol);
        }
      }

      {
        const CoalitionGame add = random_additive_game(rng, n);
        const double add_tol = default_tolerance(add, tb);
        std::vector<double> marginals(n);
        for (int j = 1; j <= n; ++j) marginals[j - 1] = marginal_to_grand(add, j);
        for (const auto& k : kernels)
          s6.check(max_abs_diff(solve_constrained(add, k).phi, marginals), add_tol);
      }

      if (n <= 3) {
        s8.check(max_abs_diff(solve_constrained(game, shap_kernel(n)).phi,
                              solve_constrained(game, uniform_kernel(n)).phi),
                 tol);
      }
      if (n == 2) {
        const Attribution base = solve_constrained(game, shap_kernel(2));
        for (const auto& k : kernels)
          s8.check(max_abs_diff(solve_constrained(game, k).phi, base.phi), tol);
      }

      for (const char* name : {"uniform", "linear", "exp", "concave"}) {
        const SymmetricKernel k = parse_kernel_spec(name, n);
        const Attribution con = solve_constrained(game, k);
        double prev = std::numeric_limits<double>::infinity();
        for (int e : {2, 4, 6}) {
          SymmetricKernel kk = k;
          kk.w[n] *= std::pow(10.0, e);
          const double d = max_abs_diff(solve_unconstrained(game, kk).first.phi, con.phi);
          s9.check(std::max(0.0, d - prev), 1e-12);  // non-increasing
          prev = d;
          if (e == 6) s9.check(d, 1e-3 * std::max(1.0, std::abs(gap)));
        }
      }

      // Reference attributions against the kernel routes.
      const Attribution shap = shapley(game);
      r1.check(max_abs_diff(solve_constrained(game, shap_kernel(n)).phi, shap.phi), tol);
      r1.check(max_abs_diff(solve_constrained(game, shap_kernel_original(n)).phi, shap.phi), tol);
      if (n <= 7)
        r2.check(max_abs_diff(shap.phi, shapley_permutation_oracle(game).phi), 1e-10);
      r3.check(max_abs_diff(solve_constrained(game, es_kernel(n)).phi, es(game).phi), tol);

      if (n >= 3 && n <= 7) {
        for (double w : {0.2, 0.5, 0.8}) {
          const Attribution via_kernel = solve_constrained(game, fesp_kernel(n, w));
          const Attribution raw = fesp_raw(game, w);
          double lo = std::numeric_limits<double>::infinity(), hi = -lo, raw_sum = 0.0;
          for (int j = 0; j < n; ++j) {
            const double d = via_kernel.phi[j] - raw.phi[j];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            raw_sum += raw.phi[j];
          }
          r4.check(hi - lo, tol);
          r4.check(std::abs(hi - (gap - raw_sum) / n), tol);
        }
      }

      const Attribution pn = ls_prenucleolus_oracle(game);
      r5.check(max_abs_diff(solve_constrained(game, uniform_kernel(n)).phi, pn.phi), tol);
      if (n <= 3) r6.check(max_abs_diff(shap.phi, pn.phi), tol);
    }
  }

  // Model-game checks on random tabular models.
  {
    std::uniform_int_distribution<int> tdist(1, 16);
    const int model_trials = std::max(1, opts.trials / 4);
    for (int n = 2; n <= std::min(opts.n_max, 6); ++n) {
      for (int trial = 0; trial < model_trials; ++trial) {
        const int t = tdist(rng);
        const Dataset ds = random_dataset(rng, n, t);
        std::uniform_int_distribution<int> rdist(0, t - 1);
        const InstanceRef inst = rdist(rng);
        const std::vector<double> x = resolve_instance(inst, ds);

        const LinearModel lin = random_linear(rng, n);
        const AdditiveModel addm = random_additive_model(rng, n);
        for (const PredictionModel model : {PredictionModel(lin), PredictionModel(addm)}) {
          const CoalitionGame g = estimate_value_function(model, ds, inst);
          m1.check(std::abs(g.grand_value() - predict(model, x)), 0.0);
          double mean = 0.0;
          for (int r = 0; r < t; ++r) mean += predict(model, ds.row(r));
          mean /= t;
          m1.check(std::abs(g.empty_value() - mean), 0.0);

          const auto cert = is_additive(g, default_tolerance(g, 1e-9));
          m2.check(cert.additive ? 0.0 : cert.max_residual,
                   default_tolerance(g, 1e-9));
        }

        {
          const CoalitionGame g = estimate_value_function(lin, ds, inst);
          const std::vector<double> means = feature_means(ds);
          const double dtol = default_tolerance(g, 1e-12);
          for (std::uint32_t m = 0; m < g.num_coalitions(); ++m) {
            double expected = 0.0;
            for (int j = 0; j < n; ++j)
              if (m >> j & 1u) expected += lin.beta[j] * (x[j] - means[j]);
            m3.check(std::abs(g.value(m) - g.empty_value() - expected), dtol);
          }

          const Attribution lm =
              linear_model_attribution(lin.beta0, lin.beta, means, x);
          const double ktol = default_tolerance(g, 1e-9);
          for (const auto& k : builtin_kernels(n))
            m4.check(max_abs_diff(solve_constrained(g, k).phi, lm.phi), ktol);
        }
      }
    }

    // The concrete two-feature product model is visibly non-additive.
    const InteractionModel prod{0.0, {0.0, 0.0}, {{1, 2, 1.0}}};
    const Dataset bg({{0.0, 0.0}, {2.0, 2.0}});
    const CoalitionGame g =
        estimate_value_function(prod, bg, std::vector<double>{1.0, 3.0});
    const std::vector<double> expected = {2.0, 1.0, 3.0, 3.0};
    m5.check(max_abs_diff(g.values(), expected), 1e-12);
    m5.check(is_additive(g).additive ? 1.0 : 0.0, 0.5);
  }

  std::vector<InvariantResult> results;
  for (Tracker* t : {&s1, &s2, &s3, &s4, &s5, &s6, &s7, &s8, &s9, &r1, &r2,
                     &r3, &r4, &r5, &r6, &m1, &m2, &m3, &m4, &m5})
    results.push_back(t->res);
  return results;
}

}  // namespace afa

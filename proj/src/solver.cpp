#include "afa/solver.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "afa/errors.hpp"

namespace afa {

namespace {

struct KernelSums {
  double A = 0.0;    // sum_{S : j in S} pi(S) = sum_s C(n-1,s-1) w[s]
  double B = 0.0;    // sum_{S : i,j in S} pi(S) = sum_s C(n-2,s-2) w[s]
  double AmB = 0.0;  // A - B, accumulated directly as sum_s C(n-2,s-1) w[s]
};

KernelSums kernel_sums(const SymmetricKernel& k) {
  KernelSums out;
  const int n = k.n;
  for (int s = 1; s <= n; ++s) {
    const double w = k.w[s];
    out.A += binomial(n - 1, s - 1) * w;
    out.B += binomial(n - 2, s - 2) * w;
    out.AmB += binomial(n - 2, s - 1) * w;
  }
  return out;
}

void require_same_n(const CoalitionGame& game, const SymmetricKernel& k) {
  if (k.n != game.n()) {
    throw DimensionMismatch("kernel n = " + std::to_string(k.n) +
                            ", game n = " + std::to_string(game.n()));
  }
}

// Per-feature weighted sums r_j = sum over the given mask range of
// pi(S) * (v(S) - v(empty)) for S containing j, ascending mask order.
std::vector<double> weighted_sums(const CoalitionGame& game,
                                  const SymmetricKernel& k,
                                  bool include_grand) {
  const int n = game.n();
  const double v0 = game.empty_value();
  const std::uint32_t last = include_grand ? game.full_mask() : game.full_mask() - 1;
  std::vector<double> r(n, 0.0);
  for (std::uint32_t m = 1; m <= last; ++m) {
    const double w = k.w[static_cast<std::size_t>(std::popcount(m))];
    if (w == 0.0) continue;
    const double wv = w * (game.value(m) - v0);
    for (int j = 0; j < n; ++j)
      if (m >> j & 1u) r[j] += wv;
  }
  return r;
}

double sum_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

Attribution solve_constrained(const CoalitionGame& game,
                              const SymmetricKernel& k) {
  require_same_n(game, k);
  const int n = game.n();
  const double gap = grand_gap(game);

  Attribution out;
  out.n = n;
  out.method = "constrained:" + k.name;
  if (n == 1) {
    // The constraint pins the single attribution; the kernel is irrelevant.
    out.phi = {gap};
    return out;
  }

  const KernelSums ks = kernel_sums(k);
  if (!(ks.AmB > 0.0))
    throw DegenerateKernel("no positive kernel weight below the grand coalition");

  // The grand-coalition term is the same for every feature and cancels
  // against the mean, so it is excluded from the sums outright.
  const std::vector<double> r = weighted_sums(game, k, /*include_grand=*/false);
  const double rbar = sum_of(r) / n;

  out.phi.resize(n);
  for (int j = 0; j < n; ++j)
    out.phi[j] = (r[j] - rbar) / ks.AmB + gap / n;
  out.efficiency_gap = sum_of(out.phi) - gap;
  return out;
}

std::pair<Attribution, SolverDiagnostics> solve_unconstrained(
    const CoalitionGame& game, const SymmetricKernel& k) {
  require_same_n(game, k);
  const int n = game.n();
  if (n < 2) throw NOutOfRange("unconstrained problem requires n >= 2");

  const KernelSums ks = kernel_sums(k);
  if (!(ks.AmB > 0.0))
    throw SingularSystem("A - B = 0: the unconstrained minimizer is not unique");

  const std::vector<double> r = weighted_sums(game, k, /*include_grand=*/true);
  const double T = sum_of(r) / (ks.A + (n - 1) * ks.B);

  Attribution out;
  out.n = n;
  out.method = "unconstrained:" + k.name;
  out.phi.resize(n);
  for (int j = 0; j < n; ++j) out.phi[j] = (r[j] - ks.B * T) / ks.AmB;
  out.efficiency_gap = sum_of(out.phi) - grand_gap(game);

  SolverDiagnostics diag;
  diag.T = T;
  diag.A = ks.A;
  diag.B = ks.B;
  return {out, diag};
}

namespace {

// Builds the weighted normal-equation pieces by direct enumeration of all
// nonempty coalitions through weight_of; no binomial shortcuts.
void assemble_normal_equations(const CoalitionGame& game,
                               const SymmetricKernel& k, Eigen::MatrixXd& M,
                               Eigen::VectorXd& rhs) {
  const int n = game.n();
  const double v0 = game.empty_value();
  M.setZero(n, n);
  rhs.setZero(n);
  std::vector<int> members;
  members.reserve(n);
  for (std::uint32_t m = 1; m <= game.full_mask(); ++m) {
    const double w = weight_of(k, Coalition{m});
    if (w == 0.0) continue;
    members.clear();
    for (int j = 0; j < n; ++j)
      if (m >> j & 1u) members.push_back(j);
    const double dv = game.value(m) - v0;
    for (std::size_t a = 0; a < members.size(); ++a) {
      rhs[members[a]] += w * dv;
      M(members[a], members[a]) += w;
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        M(members[a], members[b]) += w;
        M(members[b], members[a]) += w;
      }
    }
  }
}

struct SolveOutcome {
  Eigen::VectorXd x;
  double condition = 0.0;
  bool singular = false;
};

SolveOutcome solve_dense(const Eigen::MatrixXd& K, const Eigen::VectorXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  SolveOutcome out;
  out.singular = !(smin > smax * 1e-14) || smax == 0.0;
  out.condition = out.singular ? std::numeric_limits<double>::infinity() : smax / smin;
  if (!out.singular) out.x = svd.solve(b);
  return out;
}

}  // namespace

std::pair<Attribution, SolverDiagnostics> wls_oracle_constrained(
    const CoalitionGame& game, const SymmetricKernel& k) {
  require_same_n(game, k);
  const int n = game.n();
  const double gap = grand_gap(game);

  if (n >= 2) {
    bool interior = false;
    for (int s = 1; s <= n - 1 && !interior; ++s) interior = k.w[s] > 0.0;
    if (!interior)
      throw DegenerateKernel("no positive kernel weight below the grand coalition");
  }

  Eigen::MatrixXd M;
  Eigen::VectorXd r;
  assemble_normal_equations(game, k, M, r);

  // KKT system of the equality-constrained weighted least squares:
  //   [2M  -1] [phi   ]   [2r ]
  //   [1'   0] [lambda] = [gap]
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
  K.topLeftCorner(n, n) = 2.0 * M;
  K.topRightCorner(n, 1).setConstant(-1.0);
  K.bottomLeftCorner(1, n).setConstant(1.0);
  Eigen::VectorXd b(n + 1);
  b.head(n) = 2.0 * r;
  b(n) = gap;

  const SolveOutcome sol = solve_dense(K, b);
  if (sol.singular) throw DegenerateKernel("singular KKT system");
  if (sol.condition > 1e12) {
    throw NumericalFailure("KKT condition estimate " + std::to_string(sol.condition));
  }

  Attribution out;
  out.n = n;
  out.method = "oracle-constrained:" + k.name;
  out.phi.assign(sol.x.data(), sol.x.data() + n);
  double sum = 0.0;
  for (double p : out.phi) sum += p;
  out.efficiency_gap = sum - gap;

  SolverDiagnostics diag;
  const KernelSums ks = kernel_sums(k);
  diag.A = ks.A;
  diag.B = ks.B;
  diag.lambda = sol.x(n);
  return {out, diag};
}

std::pair<Attribution, SolverDiagnostics> wls_oracle_unconstrained(
    const CoalitionGame& game, const SymmetricKernel& k) {
  require_same_n(game, k);
  const int n = game.n();
  if (n < 2) throw NOutOfRange("unconstrained problem requires n >= 2");

  Eigen::MatrixXd M;
  Eigen::VectorXd r;
  assemble_normal_equations(game, k, M, r);

  const SolveOutcome sol = solve_dense(M, r);
  if (sol.singular)
    throw SingularSystem("normal-equation matrix is rank deficient");
  if (sol.condition > 1e12) {
    throw NumericalFailure("normal-equation condition estimate " +
                           std::to_string(sol.condition));
  }

  Attribution out;
  out.n = n;
  out.method = "oracle-unconstrained:" + k.name;
  out.phi.assign(sol.x.data(), sol.x.data() + n);
  double sum = 0.0;
  for (double p : out.phi) sum += p;
  out.efficiency_gap = sum - grand_gap(game);

  SolverDiagnostics diag;
  const KernelSums ks = kernel_sums(k);
  diag.A = ks.A;
  diag.B = ks.B;
  diag.T = sum;
  return {out, diag};
}

}  // namespace afa

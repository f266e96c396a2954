#pragma once

#include <string>
#include <utility>
#include <vector>

#include "afa/coalition_game.hpp"
#include "afa/kernels.hpp"

namespace afa {

/// An additive feature attribution: one real per feature plus a method
/// label and the realized efficiency gap sum(phi) - (v(N) - v(empty)).
struct Attribution {
  int n = 0;
  std::vector<double> phi;
  std::string method;
  double efficiency_gap = 0.0;
};

struct SolverDiagnostics {
  double T = 0.0;       // unconstrained offset (= sum of phi at the optimum)
  double A = 0.0;       // sum over coalitions containing a fixed feature
  double B = 0.0;       // sum over coalitions containing a fixed pair
  double lambda = 0.0;  // constraint multiplier, when produced by the oracle
};

/// Closed-form solution of the kernel-weighted local least-squares problem
/// under the efficiency constraint sum(phi) = v(N) - v(empty).
Attribution solve_constrained(const CoalitionGame& game,
                              const SymmetricKernel& k);

/// Closed-form solution of the unconstrained problem. Requires A - B > 0.
std::pair<Attribution, SolverDiagnostics> solve_unconstrained(
    const CoalitionGame& game, const SymmetricKernel& k);

// Independent numerical oracles. These assemble the KKT / normal-equation
// systems by direct coalition enumeration and solve them with a dense
// factorization; they share no intermediate code with the closed forms.

std::pair<Attribution, SolverDiagnostics> wls_oracle_constrained(
    const CoalitionGame& game, const SymmetricKernel& k);

std::pair<Attribution, SolverDiagnostics> wls_oracle_unconstrained(
    const CoalitionGame& game, const SymmetricKernel& k);

}  // namespace afa

#pragma once

#include <string>
#include <vector>

#include "afa/coalition_game.hpp"

namespace afa {

/// A symmetric coalition kernel: the weight depends only on the coalition
/// size, stored per size s = 0..n with w[0] = 0 by convention. Immutable
/// value type.
struct SymmetricKernel {
  int n = 0;
  std::vector<double> w;  // length n+1, indexed by coalition size
  std::string name;
  std::vector<double> params;

  double weight_of_size(int s) const { return w[static_cast<std::size_t>(s)]; }
};

// The seven kernel families plus user-supplied weights. All weights are the
// printed constants; solutions are invariant under positive rescaling.

/// w[s] = n / (C(n,s) * s * (n-s)) for 1 <= s <= n-1; w[n] = 0.
SymmetricKernel shap_kernel(int n);

/// w[s] = (n-1) / (C(n,s) * s * (n-s)) for 1 <= s <= n-1; w[n] = 0.
SymmetricKernel shap_kernel_original(int n);

/// w[1] = 1, zero elsewhere.
SymmetricKernel es_kernel(int n);

/// w[1] = w_tau, w[n-1] = w[n] = 1 - w_tau, zero mid-band. Requires n >= 3.
SymmetricKernel fesp_kernel(int n, double w_tau);

/// w[s] = 1 / 2^(n-2) for all s >= 1.
SymmetricKernel uniform_kernel(int n);

/// w[s] = s / (n * 2^(n-3)).
SymmetricKernel linear_kernel(int n);

/// w[s] = r^(s-1) / (r+1)^(n-2) with r = exp(1/sigma^2).
SymmetricKernel exp_kernel(int n, double sigma);

/// w[s] = 2^(s-1) / 3^(n-2); the exp kernel at sigma = sqrt(1/ln 2).
SymmetricKernel simplified_exp_kernel(int n);

/// w[s] = s*(2n-s) / ((3n^2 - n + 2) * 2^(n-4)).
SymmetricKernel concave_kernel(int n);

SymmetricKernel scale_kernel(const SymmetricKernel& k, double c);

/// weights[s-1] becomes w[s]; some weight among sizes 1..n-1 must be positive.
SymmetricKernel custom_kernel(int n, const std::vector<double>& weights);

double weight_of(const SymmetricKernel& k, Coalition s);

/// Display-only normalizer: sum over s = 1..n-1 of C(n,s) * w[s].
double interior_normalizer(const SymmetricKernel& k);

/// CLI kernel spec strings: "shap", "shap-orig", "es", "fesp:<w>", "uniform",
/// "linear", "exp:<sigma>", "exp", "concave", "custom:<w1,...,wn>".
SymmetricKernel parse_kernel_spec(const std::string& spec, int n);

}  // namespace afa

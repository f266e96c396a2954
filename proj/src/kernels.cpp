#include "afa/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "afa/errors.hpp"

namespace afa {

namespace {

void require_n(int n, int min_n) {
  if (n < min_n || n > kMaxFeatures) {
    throw NOutOfRange("n = " + std::to_string(n) + ", expected " +
                      std::to_string(min_n) + ".." + std::to_string(kMaxFeatures));
  }
}

SymmetricKernel blank(int n, std::string name) {
  SymmetricKernel k;
  k.n = n;
  k.w.assign(static_cast<std::size_t>(n) + 1, 0.0);
  k.name = std::move(name);
  return k;
}

std::string format_param(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

}  // namespace

SymmetricKernel shap_kernel(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "shap");
  for (int s = 1; s <= n - 1; ++s)
    k.w[s] = n / (binomial(n, s) * s * (n - s));
  // w[n] would divide by zero; the constrained solution never depends on it.
  return k;
}

SymmetricKernel shap_kernel_original(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "shap-orig");
  for (int s = 1; s <= n - 1; ++s)
    k.w[s] = (n - 1) / (binomial(n, s) * s * (n - s));
  return k;
}

SymmetricKernel es_kernel(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "es");
  k.w[1] = 1.0;
  return k;
}

SymmetricKernel fesp_kernel(int n, double w_tau) {
  require_n(n, 2);
  if (!(w_tau > 0.0 && w_tau < 1.0))
    throw WeightOutOfRange("w_tau = " + format_param(w_tau) + ", expected (0,1)");
  if (n == 2) {
    // Size 1 and size n-1 coincide; the band definition is ambiguous there.
    throw DegenerateBand("fesp kernel is undefined for n = 2");
  }
  SymmetricKernel k = blank(n, "fesp");
  k.params = {w_tau};
  k.w[1] = w_tau;
  k.w[n - 1] = 1.0 - w_tau;
  k.w[n] = 1.0 - w_tau;
  return k;
}

SymmetricKernel uniform_kernel(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "uniform");
  const double w = std::ldexp(1.0, -(n - 2));
  for (int s = 1; s <= n; ++s) k.w[s] = w;
  return k;
}

SymmetricKernel linear_kernel(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "linear");
  const double denom = n * std::ldexp(1.0, n - 3);
  for (int s = 1; s <= n; ++s) k.w[s] = s / denom;
  return k;
}

SymmetricKernel exp_kernel(int n, double sigma) {
  require_n(n, 2);
  if (!(sigma > 0.0))
    throw WidthOutOfRange("sigma = " + format_param(sigma) + ", expected > 0");
  const double r = std::exp(1.0 / (sigma * sigma));
  if (!std::isfinite(r) || !std::isfinite(std::pow(r, n - 1)) ||
      !std::isfinite(std::pow(r + 1.0, n - 2))) {
    throw Overflow("exp kernel not representable at sigma = " + format_param(sigma) +
                   ", n = " + std::to_string(n));
  }
  SymmetricKernel k = blank(n, "exp");
  k.params = {sigma};
  const double denom = std::pow(r + 1.0, n - 2);
  for (int s = 1; s <= n; ++s) k.w[s] = std::pow(r, s - 1) / denom;
  return k;
}

SymmetricKernel simplified_exp_kernel(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "exp");
  const double denom = std::pow(3.0, n - 2);
  for (int s = 1; s <= n; ++s) k.w[s] = std::ldexp(1.0, s - 1) / denom;
  return k;
}

SymmetricKernel concave_kernel(int n) {
  require_n(n, 2);
  SymmetricKernel k = blank(n, "concave");
  const double denom = (3.0 * n * n - n + 2.0) * std::ldexp(1.0, n - 4);
  for (int s = 1; s <= n; ++s) k.w[s] = s * (2.0 * n - s) / denom;
  return k;
}

SymmetricKernel scale_kernel(const SymmetricKernel& k, double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw NonPositiveScale("scale = " + format_param(c));
  SymmetricKernel out = k;
  for (double& w : out.w) w *= c;
  out.name = k.name + "*" + format_param(c);
  return out;
}

SymmetricKernel custom_kernel(int n, const std::vector<double>& weights) {
  require_n(n, 1);
  if (static_cast<int>(weights.size()) != n) {
    throw DimensionMismatch("custom kernel: " + std::to_string(weights.size()) +
                            " weights for n = " + std::to_string(n));
  }
  SymmetricKernel k = blank(n, "custom");
  bool interior_positive = false;
  for (int s = 1; s <= n; ++s) {
    const double w = weights[s - 1];
    if (!std::isfinite(w)) throw NonFinite("custom kernel weight at size " + std::to_string(s));
    if (w < 0.0) throw NegativeWeight("w[" + std::to_string(s) + "] = " + format_param(w));
    if (s < n && w > 0.0) interior_positive = true;
    k.w[s] = w;
  }
  if (!interior_positive)
    throw AllZeroInterior("custom kernel has no positive weight below size n");
  return k;
}

double weight_of(const SymmetricKernel& k, Coalition s) {
  if (s.mask >= (std::uint32_t{1} << k.n)) {
    throw MaskOutOfRange("mask " + std::to_string(s.mask) + " for n = " +
                         std::to_string(k.n));
  }
  return k.w[static_cast<std::size_t>(s.size())];
}

double interior_normalizer(const SymmetricKernel& k) {
  double z = 0.0;
  for (int s = 1; s <= k.n - 1; ++s) z += binomial(k.n, s) * k.w[s];
  return z;
}

SymmetricKernel parse_kernel_spec(const std::string& spec, int n) {
  std::string head = spec;
  std::string arg;
  if (auto pos = spec.find(':'); pos != std::string::npos) {
    head = spec.substr(0, pos);
    arg = spec.substr(pos + 1);
  }
  auto parse_real = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double x = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return x;
    } catch (const std::exception&) {
      throw ParseError("kernel spec \"" + spec + "\": bad number \"" + s + "\"");
    }
  };

  if (head == "shap" && arg.empty()) return shap_kernel(n);
  if (head == "shap-orig" && arg.empty()) return shap_kernel_original(n);
  if (head == "es" && arg.empty()) return es_kernel(n);
  if (head == "uniform" && arg.empty()) return uniform_kernel(n);
  if (head == "linear" && arg.empty()) return linear_kernel(n);
  if (head == "concave" && arg.empty()) return concave_kernel(n);
  if (head == "exp") {
    if (arg.empty()) return simplified_exp_kernel(n);
    return exp_kernel(n, parse_real(arg));
  }
  if (head == "fesp") {
    if (arg.empty()) throw ParseError("kernel spec \"fesp\" requires a weight, e.g. fesp:0.5");
    return fesp_kernel(n, parse_real(arg));
  }
  if (head == "custom") {
    std::vector<double> weights;
    std::string item;
    std::istringstream in(arg);
    while (std::getline(in, item, ',')) weights.push_back(parse_real(item));
    return custom_kernel(n, weights);
  }
  throw ParseError("unknown kernel spec \"" + spec + "\"");
}

}  // namespace afa

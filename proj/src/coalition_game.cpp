#include "afa/coalition_game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "afa/errors.hpp"
#include "json.hpp"

namespace afa {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  // Pascal rows stay exactly representable for the sizes used here.
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

CoalitionGame::CoalitionGame(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (n < 1 || n > kMaxFeatures) {
    throw NOutOfRange("n = " + std::to_string(n) + ", expected 1.." +
                      std::to_string(kMaxFeatures));
  }
  const std::size_t expected = std::size_t{1} << n;
  if (values_.size() != expected) {
    throw DimensionMismatch("value table has " +
                            std::to_string(values_.size()) + " entries, 2^n = " +
                            std::to_string(expected));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFinite("value table contains a non-finite entry");
  }
}

double CoalitionGame::value(std::uint32_t mask) const {
  if (mask >= num_coalitions()) {
    throw MaskOutOfRange("mask " + std::to_string(mask) + " for n = " +
                         std::to_string(n_));
  }
  return values_[mask];
}

CoalitionGame make_game(int n, std::vector<double> values) {
  return CoalitionGame(n, std::move(values));
}

double grand_gap(const CoalitionGame& game) {
  return game.grand_value() - game.empty_value();
}

double default_tolerance(const CoalitionGame& game, double base) {
  double vmax = 0.0;
  for (double v : game.values()) vmax = std::max(vmax, std::abs(v));
  return base * std::max(1.0, vmax);
}

AdditivityCertificate is_additive(const CoalitionGame& game, double tol) {
  const int n = game.n();
  const double v0 = game.empty_value();
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) a[j] = game.value(1u << j) - v0;

  double max_residual = 0.0;
  for (std::uint32_t m = 0; m < game.num_coalitions(); ++m) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      if (m >> j & 1u) sum += a[j];
    max_residual = std::max(max_residual, std::abs(game.value(m) - v0 - sum));
  }

  AdditivityCertificate cert;
  cert.max_residual = max_residual;
  cert.additive = max_residual <= tol;
  if (cert.additive) cert.a = std::move(a);
  return cert;
}

AdditivityCertificate is_additive(const CoalitionGame& game) {
  return is_additive(game, default_tolerance(game));
}

double marginal_to_grand(const CoalitionGame& game, int j) {
  if (j < 1 || j > game.n()) {
    throw IndexOutOfRange("feature " + std::to_string(j) + " for n = " +
                          std::to_string(game.n()));
  }
  const std::uint32_t full = game.full_mask();
  return game.value(full) - game.value(full & ~(1u << (j - 1)));
}

CoalitionGame game_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("game JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("game JSON: expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "values")
      throw ParseError("game JSON: unknown key \"" + key + "\"");
  }
  if (!j.contains("n") || !j.contains("values"))
    throw ParseError("game JSON: requires keys \"n\" and \"values\"");
  if (!j["n"].is_number_integer()) throw ParseError("game JSON: \"n\" must be an integer");
  if (!j["values"].is_array()) throw ParseError("game JSON: \"values\" must be an array");
  std::vector<double> values;
  values.reserve(j["values"].size());
  for (const auto& e : j["values"]) {
    if (!e.is_number()) throw ParseError("game JSON: values must be numbers");
    values.push_back(e.get<double>());
  }
  return make_game(j["n"].get<int>(), std::move(values));
}

std::string game_to_json(const CoalitionGame& game) {
  std::ostringstream out;
  out.precision(17);
  out << "{\"n\":" << game.n() << ",\"values\":[";
  const auto& v = game.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << v[i];
  }
  out << "]}";
  return out.str();
}

}  // namespace afa

#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace afa {

// Hard cap on the feature count: the value table has 2^n entries.
inline constexpr int kMaxFeatures = 20;

/// A subset of the feature set {1,...,n}, encoded as a bitmask with
/// bit j-1 set iff feature j is present.
struct Coalition {
  std::uint32_t mask = 0;

  int size() const { return std::popcount(mask); }
  bool contains(int feature) const {
    return feature >= 1 && (mask >> (feature - 1) & 1u) != 0;
  }
  static Coalition of(std::initializer_list<int> features) {
    Coalition s;
    for (int j : features) s.mask |= 1u << (j - 1);
    return s;
  }
};

/// A characteristic-function game (N, v): v over all 2^n coalitions, stored
/// as a table indexed by coalition mask. v(empty set) is stored like any
/// other entry, no zero convention. Immutable after construction.
class CoalitionGame {
 public:
  CoalitionGame(int n, std::vector<double> values);

  int n() const { return n_; }
  std::uint32_t num_coalitions() const { return 1u << n_; }
  std::uint32_t full_mask() const { return (1u << n_) - 1u; }

  double value(std::uint32_t mask) const;
  double value(Coalition s) const { return value(s.mask); }
  double empty_value() const { return values_[0]; }
  double grand_value() const { return values_.back(); }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_;
  std::vector<double> values_;
};

struct AdditivityCertificate {
  bool additive = false;
  std::optional<std::vector<double>> a;  // a_j = v({j}) - v(empty), when additive
  double max_residual = 0.0;
};

CoalitionGame make_game(int n, std::vector<double> values);

/// v(N) - v(empty), the total amount an AFA distributes.
double grand_gap(const CoalitionGame& game);

/// 1e-9 * max(1, max_S |v(S)|) by default; `base` overrides the 1e-9.
double default_tolerance(const CoalitionGame& game, double base = 1e-9);

AdditivityCertificate is_additive(const CoalitionGame& game, double tol);
AdditivityCertificate is_additive(const CoalitionGame& game);

/// v(N) - v(N \ {j}) for feature j in 1..n.
double marginal_to_grand(const CoalitionGame& game, int j);

// JSON form: {"n": <int>, "values": [<2^n reals>]}, index = coalition mask.
CoalitionGame game_from_json(const std::string& text);
std::string game_to_json(const CoalitionGame& game);

/// Exact binomial coefficient as a double; valid for n <= 40 or so.
double binomial(int n, int k);

}  // namespace afa

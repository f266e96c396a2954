#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace afa {

struct InvariantResult {
  std::string name;
  bool passed = false;
  double worst_deviation = 0.0;
  long checks = 0;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  int trials = 100;       // random games per feature count
  int n_max = 6;          // 2 <= n_max <= 8
  double tol_base = 1e-8; // deviation tolerance scale
};

/// Runs the full invariant suite (solver, reference-attribution and
/// model-game properties) on seeded random games and models.
std::vector<InvariantResult> run_invariant_suite(const VerifyOptions& opts);

}  // namespace afa

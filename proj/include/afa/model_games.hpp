#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "afa/coalition_game.hpp"

namespace afa {

/// A t x n real matrix of background instances with optional feature names.
class Dataset {
 public:
  Dataset(std::vector<std::vector<double>> rows,
          std::optional<std::vector<std::string>> names = std::nullopt);

  int t() const { return static_cast<int>(rows_.size()); }
  int n() const { return static_cast<int>(rows_[0].size()); }
  const std::vector<double>& row(int r) const { return rows_[r]; }
  const std::optional<std::vector<std::string>>& names() const {
    return names_;
  }

 private:
  std::vector<std::vector<double>> rows_;
  std::optional<std::vector<std::string>> names_;
};

struct LinearModel {
  double beta0 = 0.0;
  std::vector<double> beta;
};

/// f(x) = sum_j f_j(x_j) with f_j a polynomial given by its coefficients
/// (terms[j][k] multiplies x_j^k).
struct AdditiveModel {
  std::vector<std::vector<double>> terms;
};

struct InteractionModel {
  struct Pair {
    int j = 0;  // 1-based, j < k
    int k = 0;
    double gamma = 0.0;
  };
  double beta0 = 0.0;
  std::vector<double> beta;
  std::vector<Pair> gamma;
};

using PredictionModel = std::variant<LinearModel, AdditiveModel, InteractionModel>;

/// Either a row index into the background dataset or an explicit vector.
using InstanceRef = std::variant<int, std::vector<double>>;

int model_dim(const PredictionModel& model);
double predict(const PredictionModel& model, std::span<const double> row);

std::vector<double> resolve_instance(const InstanceRef& instance,
                                     const Dataset& background);

/// The empirical-marginal characteristic function: for each coalition S,
/// v(S) averages f over background rows with the features in S pinned to
/// the explained instance. v(N) = f(x) exactly, v(empty) = mean prediction.
CoalitionGame estimate_value_function(const PredictionModel& model,
                                      const Dataset& background,
                                      const InstanceRef& instance);

std::vector<double> feature_means(const Dataset& ds);

// Strict parsers: unknown JSON keys and ragged CSV rows are rejected.
Dataset parse_dataset_csv(const std::string& text);
PredictionModel model_from_json(const std::string& text);

Dataset load_dataset_csv(const std::string& path);
PredictionModel load_model_json(const std::string& path);
CoalitionGame load_game_json(const std::string& path);

}  // namespace afa

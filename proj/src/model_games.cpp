#include "afa/model_games.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "afa/errors.hpp"
#include "json.hpp"

namespace afa {

Dataset::Dataset(std::vector<std::vector<double>> rows,
                 std::optional<std::vector<std::string>> names)
    : rows_(std::move(rows)), names_(std::move(names)) {
  if (rows_.empty()) throw EmptyBackground("dataset has no rows");
  const std::size_t n = rows_[0].size();
  if (n == 0) throw DimensionMismatch("dataset rows are empty");
  for (const auto& row : rows_) {
    if (row.size() != n)
      throw DimensionMismatch("dataset is not rectangular");
    for (double x : row)
      if (!std::isfinite(x)) throw NonFinite("dataset contains a non-finite entry");
  }
  if (names_) {
    if (names_->size() != n)
      throw DimensionMismatch("feature name count does not match columns");
    std::set<std::string> seen(names_->begin(), names_->end());
    if (seen.size() != names_->size())
      throw ParseError("feature names are not unique");
  }
}

int model_dim(const PredictionModel& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>)
          return static_cast<int>(m.beta.size());
        else if constexpr (std::is_same_v<T, AdditiveModel>)
          return static_cast<int>(m.terms.size());
        else
          return static_cast<int>(m.beta.size());
      },
      model);
}

double predict(const PredictionModel& model, std::span<const double> row) {
  if (static_cast<int>(row.size()) != model_dim(model)) {
    throw DimensionMismatch("row length " + std::to_string(row.size()) +
                            ", model n = " + std::to_string(model_dim(model)));
  }
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          double y = m.beta0;
          for (std::size_t j = 0; j < m.beta.size(); ++j) y += m.beta[j] * row[j];
          return y;
        } else if constexpr (std::is_same_v<T, AdditiveModel>) {
          double y = 0.0;
          for (std::size_t j = 0; j < m.terms.size(); ++j) {
            double p = 1.0, fj = 0.0;
            for (double c : m.terms[j]) {
              fj += c * p;
              p *= row[j];
            }
            y += fj;
          }
          return y;
        } else {
          double y = m.beta0;
          for (std::size_t j = 0; j < m.beta.size(); ++j) y += m.beta[j] * row[j];
          for (const auto& g : m.gamma) y += g.gamma * row[g.j - 1] * row[g.k - 1];
          return y;
        }
      },
      model);
}

std::vector<double> resolve_instance(const InstanceRef& instance,
                                     const Dataset& background) {
  if (const int* idx = std::get_if<int>(&instance)) {
    if (*idx < 0 || *idx >= background.t())
      throw IndexOutOfRange("instance row " + std::to_string(*idx) + " of " +
                            std::to_string(background.t()));
    return background.row(*idx);
  }
  const auto& vec = std::get<std::vector<double>>(instance);
  if (static_cast<int>(vec.size()) != background.n())
    throw DimensionMismatch("instance length " + std::to_string(vec.size()) +
                            ", dataset n = " + std::to_string(background.n()));
  for (double x : vec)
    if (!std::isfinite(x)) throw NonFinite("instance contains a non-finite entry");
  return vec;
}

CoalitionGame estimate_value_function(const PredictionModel& model,
                                      const Dataset& background,
                                      const InstanceRef& instance) {
  const int n = background.n();
  if (n != model_dim(model))
    throw DimensionMismatch("dataset n = " + std::to_string(n) + ", model n = " +
                            std::to_string(model_dim(model)));
  if (n > kMaxFeatures)
    throw NOutOfRange("dataset has " + std::to_string(n) + " features, cap is " +
                      std::to_string(kMaxFeatures));
  const std::vector<double> x = resolve_instance(instance, background);
  const int t = background.t();

  const std::uint32_t count = std::uint32_t{1} << n;
  std::vector<double> values(count);
  std::vector<double> composite(n);
  for (std::uint32_t m = 0; m < count; ++m) {
    double sum = 0.0;
    for (int r = 0; r < t; ++r) {
      const auto& row = background.row(r);
      for (int j = 0; j < n; ++j)
        composite[j] = (m >> j & 1u) ? x[j] : row[j];
      sum += predict(model, composite);
    }
    values[m] = sum / t;
  }
  // The grand coalition ignores the background entirely.
  values[count - 1] = predict(model, x);
  return CoalitionGame(n, std::move(values));
}

std::vector<double> feature_means(const Dataset& ds) {
  std::vector<double> means(ds.n(), 0.0);
  for (int r = 0; r < ds.t(); ++r) {
    const auto& row = ds.row(r);
    for (int j = 0; j < ds.n(); ++j) means[j] += row[j];
  }
  for (double& m : means) m /= ds.t();
  return means;
}

namespace {

bool parse_real(std::string_view field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void reject_unknown_keys(const nlohmann::json& j,
                         const std::set<std::string>& allowed,
                         const std::string& what) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key))
      throw ParseError(what + ": unknown key \"" + key + "\"");
  }
}

std::vector<double> real_array(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ParseError(what + " must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
  }
  if (lines.empty()) throw ParseError("CSV: no content");

  // Header row detected by any non-numeric cell on the first line.
  std::optional<std::vector<std::string>> names;
  std::size_t first_data = 0;
  {
    const auto fields = split_fields(lines[0]);
    bool all_numeric = true;
    double tmp;
    for (const auto& f : fields)
      if (!parse_real(f, tmp)) { all_numeric = false; break; }
    if (!all_numeric) {
      names = fields;
      first_data = 1;
    }
  }
  if (first_data >= lines.size()) throw ParseError("CSV: header but no data rows");

  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (std::size_t i = first_data; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw ParseError("CSV line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(width) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_real(fields[c], row[c])) {
        throw ParseError("CSV line " + std::to_string(i + 1) + ", field " +
                         std::to_string(c + 1) + ": not a number: \"" +
                         fields[c] + "\"");
      }
    }
    rows.push_back(std::move(row));
  }
  if (names && names->size() != width)
    throw ParseError("CSV: header has " + std::to_string(names->size()) +
                     " fields, data has " + std::to_string(width));
  return Dataset(std::move(rows), std::move(names));
}

PredictionModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ParseError("model JSON: requires a string \"type\" key");
  const std::string type = j["type"].get<std::string>();

  if (type == "linear") {
    reject_unknown_keys(j, {"type", "beta0", "beta"}, "linear model");
    if (!j.contains("beta0") || !j["beta0"].is_number() || !j.contains("beta"))
      throw ParseError("linear model: requires numeric \"beta0\" and \"beta\"");
    LinearModel m;
    m.beta0 = j["beta0"].get<double>();
    m.beta = real_array(j["beta"], "\"beta\"");
    if (m.beta.empty()) throw ParseError("linear model: empty \"beta\"");
    for (double b : m.beta)
      if (!std::isfinite(b)) throw NonFinite("linear model coefficient");
    return m;
  }
  if (type == "additive") {
    reject_unknown_keys(j, {"type", "terms"}, "additive model");
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
      throw ParseError("additive model: requires a nonempty \"terms\" array");
    AdditiveModel m;
    for (const auto& term : j["terms"])
      m.terms.push_back(real_array(term, "additive term"));
    for (const auto& term : m.terms)
      for (double c : term)
        if (!std::isfinite(c)) throw NonFinite("additive model coefficient");
    return m;
  }
  if (type == "interaction") {
    reject_unknown_keys(j, {"type", "beta0", "beta", "gamma"}, "interaction model");
    if (!j.contains("beta0") || !j["beta0"].is_number() || !j.contains("beta") ||
        !j.contains("gamma") || !j["gamma"].is_array())
      throw ParseError("interaction model: requires \"beta0\", \"beta\", \"gamma\"");
    InteractionModel m;
    m.beta0 = j["beta0"].get<double>();
    m.beta = real_array(j["beta"], "\"beta\"");
    if (m.beta.empty()) throw ParseError("interaction model: empty \"beta\"");
    const int n = static_cast<int>(m.beta.size());
    std::set<std::pair<int, int>> seen;
    for (const auto& e : j["gamma"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number())
        throw ParseError("interaction model: gamma entries must be [j, k, value]");
      InteractionModel::Pair g;
      g.j = e[0].get<int>();
      g.k = e[1].get<int>();
      g.gamma = e[2].get<double>();
      if (g.j < 1 || g.k <= g.j || g.k > n)
        throw ParseError("interaction model: gamma indices need 1 <= j < k <= n");
      if (!seen.insert({g.j, g.k}).second)
        throw ParseError("interaction model: duplicate gamma pair");
      if (!std::isfinite(g.gamma)) throw NonFinite("interaction coefficient");
      m.gamma.push_back(g);
    }
    for (double b : m.beta)
      if (!std::isfinite(b)) throw NonFinite("interaction model coefficient");
    return m;
  }
  throw ParseError("model JSON: unknown type \"" + type + "\"");
}

Dataset load_dataset_csv(const std::string& path) {
  return parse_dataset_csv(read_file(path));
}

PredictionModel load_model_json(const std::string& path) {
  return model_from_json(read_file(path));
}

CoalitionGame load_game_json(const std::string& path) {
  return game_from_json(read_file(path));
}

}  // namespace afa

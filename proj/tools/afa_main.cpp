#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "afa/coalition_game.hpp"
#include "afa/errors.hpp"
#include "afa/kernels.hpp"
#include "afa/model_games.hpp"
#include "afa/reference.hpp"
#include "afa/solver.hpp"
#include "afa/verify.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

int format_digits(const std::string& format) {
  return format == "table" ? 4 : 17;
}

struct Inputs {
  std::optional<afa::CoalitionGame> game;
  std::optional<afa::Dataset> data;
  std::optional<afa::PredictionModel> model;
  std::vector<std::string> names;  // feature labels for rendering
};

Inputs load_inputs(const std::string& game_path, const std::string& data_path,
                   const std::string& model_path, int instance_row,
                   const std::string& instance_vec) {
  const bool have_game = !game_path.empty();
  const bool have_data = !data_path.empty() || !model_path.empty();
  if (have_game == have_data) {
    throw UsageError("exactly one input source required: --game, or --data with --model");
  }

  Inputs in;
  if (have_game) {
    in.game = afa::load_game_json(game_path);
  } else {
    if (data_path.empty() || model_path.empty())
      throw UsageError("--data and --model must be given together");
    in.data = afa::load_dataset_csv(data_path);
    in.model = afa::load_model_json(model_path);

    afa::InstanceRef instance = instance_row;
    if (!instance_vec.empty()) {
      std::vector<double> vec;
      std::string item;
      std::istringstream s(instance_vec);
      while (std::getline(s, item, ',')) {
        try {
          vec.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw afa::ParseError("--instance-vec: bad number \"" + item + "\"");
        }
      }
      instance = std::move(vec);
    } else if (instance_row < 0) {
      throw UsageError("dataset input requires --instance or --instance-vec");
    }
    in.game = afa::estimate_value_function(*in.model, *in.data, instance);
  }

  const int n = in.game->n();
  if (in.data && in.data->names()) {
    in.names = *in.data->names();
  } else {
    for (int j = 1; j <= n; ++j) in.names.push_back(std::to_string(j));
  }
  return in;
}

// Resolves a CLI spec string as either a kernel (closed or oracle route) or
// a reference method.
afa::Attribution compute_one(const Inputs& in, const std::string& spec,
                             bool oracle, bool unconstrained) {
  const afa::CoalitionGame& game = *in.game;
  const int n = game.n();

  const bool is_kernel =
      spec == "shap" || spec == "shap-orig" || spec == "es" ||
      spec == "uniform" || spec == "linear" || spec == "concave" ||
      spec == "exp" || spec.rfind("exp:", 0) == 0 ||
      spec.rfind("fesp:", 0) == 0 || spec.rfind("custom:", 0) == 0;
  if (is_kernel) {
    const afa::SymmetricKernel k = afa::parse_kernel_spec(spec, n);
    if (unconstrained) {
      return (oracle ? afa::wls_oracle_unconstrained(game, k)
                     : afa::solve_unconstrained(game, k))
          .first;
    }
    if (oracle) return afa::wls_oracle_constrained(game, k).first;
    return afa::solve_constrained(game, k);
  }

  if (spec == "shapley") return afa::shapley(game);
  if (spec == "lsprenucleolus") return afa::ls_prenucleolus_oracle(game);
  if (spec.rfind("fesp-raw:", 0) == 0) {
    try {
      return afa::fesp_raw(game, std::stod(spec.substr(9)));
    } catch (const std::invalid_argument&) {
      throw afa::ParseError("bad fesp-raw weight in \"" + spec + "\"");
    }
  }
  if (spec == "lm") {
    if (!in.data || !in.model)
      throw UsageError("method \"lm\" requires --data and --model input");
    const auto* lin = std::get_if<afa::LinearModel>(&*in.model);
    if (!lin) throw UsageError("method \"lm\" requires a linear model");
    // v(N) - v(S) structure is not needed; reconstruct the instance from the
    // game's grand coalition via the stored dataset means.
    throw UsageError("method \"lm\" must be requested via compute_lm");
  }
  throw UsageError("unknown kernel or method spec \"" + spec + "\"");
}

afa::Attribution compute_lm(const Inputs& in, int instance_row,
                            const std::string& instance_vec) {
  if (!in.data || !in.model)
    throw UsageError("method \"lm\" requires --data and --model input");
  const auto* lin = std::get_if<afa::LinearModel>(&*in.model);
  if (!lin) throw UsageError("method \"lm\" requires a linear model");
  afa::InstanceRef instance = instance_row;
  if (!instance_vec.empty()) {
    std::vector<double> vec;
    std::string item;
    std::istringstream s(instance_vec);
    while (std::getline(s, item, ',')) vec.push_back(std::stod(item));
    instance = std::move(vec);
  }
  const std::vector<double> x = afa::resolve_instance(instance, *in.data);
  return afa::linear_model_attribution(lin->beta0, lin->beta,
                                       afa::feature_means(*in.data), x);
}

void render_attribution(const afa::Attribution& att, const Inputs& in,
                        const std::string& format) {
  const int d = format_digits(format);
  const double gap = afa::grand_gap(*in.game);
  if (format == "json") {
    std::string out = "{\"method\":\"" + att.method + "\",\"n\":" +
                      std::to_string(att.n) + ",\"features\":[";
    for (int j = 0; j < att.n; ++j)
      out += std::string(j ? "," : "") + "\"" + in.names[j] + "\"";
    out += "],\"phi\":[";
    for (int j = 0; j < att.n; ++j)
      out += std::string(j ? "," : "") + fmt(att.phi[j], d);
    out += "],\"grand_gap\":" + fmt(gap, d) +
           ",\"efficiency_gap\":" + fmt(att.efficiency_gap, d) + "}";
    std::cout << out << "\n";
  } else if (format == "csv") {
    std::cout << "feature,phi\n";
    for (int j = 0; j < att.n; ++j)
      std::cout << in.names[j] << ',' << fmt(att.phi[j], d) << "\n";
    std::cout << "grand_gap," << fmt(gap, d) << "\n";
    std::cout << "efficiency_gap," << fmt(att.efficiency_gap, d) << "\n";
  } else {
    std::cout << "method: " << att.method << "\n";
    for (int j = 0; j < att.n; ++j)
      std::cout << "  " << in.names[j] << "\t" << fmt(att.phi[j], d) << "\n";
    std::cout << "grand_gap: " << fmt(gap, d) << "\n";
    std::cout << "efficiency_gap: " << fmt(att.efficiency_gap, d) << "\n";
  }
}

void render_compare(const std::vector<std::string>& labels,
                    const std::vector<afa::Attribution>& atts, const Inputs& in,
                    const std::string& format) {
  const int d = format_digits(format);
  const int n = atts[0].n;
  const std::size_t k = atts.size();

  std::vector<std::string> pair_names;
  std::vector<double> pair_diffs;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double diff = 0.0;
      for (int j = 0; j < n; ++j)
        diff = std::max(diff, std::abs(atts[a].phi[j] - atts[b].phi[j]));
      pair_names.push_back(labels[a] + " vs " + labels[b]);
      pair_diffs.push_back(diff);
    }
  }

  if (format == "json") {
    std::string out = "{\"methods\":[";
    for (std::size_t a = 0; a < k; ++a)
      out += std::string(a ? "," : "") + "\"" + labels[a] + "\"";
    out += "],\"features\":[";
    for (int j = 0; j < n; ++j)
      out += std::string(j ? "," : "") + "\"" + in.names[j] + "\"";
    out += "],\"phi\":[";
    for (std::size_t a = 0; a < k; ++a) {
      out += a ? ",[" : "[";
      for (int j = 0; j < n; ++j)
        out += std::string(j ? "," : "") + fmt(atts[a].phi[j], d);
      out += "]";
    }
    out += "],\"efficiency_gap\":[";
    for (std::size_t a = 0; a < k; ++a)
      out += std::string(a ? "," : "") + fmt(atts[a].efficiency_gap, d);
    out += "],\"pairwise_max_abs_diff\":[";
    for (std::size_t p = 0; p < pair_diffs.size(); ++p) {
      out += std::string(p ? "," : "") + "{\"pair\":\"" + pair_names[p] +
             "\",\"value\":" + fmt(pair_diffs[p], d) + "}";
    }
    out += "]}";
    std::cout << out << "\n";
  } else {
    const char sep = format == "csv" ? ',' : '\t';
    std::cout << "feature";
    for (const auto& l : labels) std::cout << sep << l;
    std::cout << "\n";
    for (int j = 0; j < n; ++j) {
      std::cout << in.names[j];
      for (const auto& a : atts) std::cout << sep << fmt(a.phi[j], d);
      std::cout << "\n";
    }
    std::cout << "efficiency_gap";
    for (const auto& a : atts) std::cout << sep << fmt(a.efficiency_gap, d);
    std::cout << "\n";
    for (std::size_t p = 0; p < pair_diffs.size(); ++p) {
      std::cout << "max_abs_diff(" << pair_names[p] << ")" << sep
                << fmt(pair_diffs[p], d) << "\n";
    }
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream s(csv);
  while (std::getline(s, item, ',')) out.push_back(item);
  return out;
}

// Kernel specs carry comma-separated arguments (custom:...), so the list
// separator only splits before a recognized spec head.
std::vector<std::string> split_spec_list(const std::string& csv) {
  std::vector<std::string> raw = split_list(csv);
  std::vector<std::string> out;
  for (auto& item : raw) {
    const bool continuation =
        !out.empty() && (out.back().rfind("custom:", 0) == 0 ||
                         out.back().rfind("custom:", 0) == 0);
    bool numeric = !item.empty() && (std::isdigit(item[0]) || item[0] == '-' ||
                                     item[0] == '+' || item[0] == '.');
    if (continuation && numeric)
      out.back() += "," + item;
    else
      out.push_back(item);
  }
  return out;
}

int run_attribute(const Inputs& in, const std::string& spec, bool oracle,
                  bool unconstrained, const std::string& format,
                  int instance_row, const std::string& instance_vec) {
  afa::Attribution att =
      spec == "lm" ? compute_lm(in, instance_row, instance_vec)
                   : compute_one(in, spec, oracle, unconstrained);
  render_attribution(att, in, format);
  return 0;
}

int run_verify(std::uint64_t seed, int trials, int n_max, double tol_base) {
  afa::VerifyOptions opts;
  opts.seed = seed;
  opts.trials = trials;
  opts.n_max = n_max;
  opts.tol_base = tol_base;
  const auto results = afa::run_invariant_suite(opts);

  std::cout << "seed " << seed << "  trials " << trials << "  n-max " << n_max
            << "\n";
  int passed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  checks "
              << r.checks << "  worst " << fmt(r.worst_deviation, 3) << "\n";
    passed += r.passed ? 1 : 0;
  }
  std::cout << "invariants passed: " << passed << "/" << results.size() << "\n";
  return passed == static_cast<int>(results.size()) ? 0 : kExitNumerical;
}

int run_kernels(int n, const std::string& specs, bool normalized,
                const std::string& format) {
  const int d = format_digits(format);
  const char sep = format == "csv" ? ',' : '\t';
  std::cout << "size";
  std::vector<afa::SymmetricKernel> kernels;
  for (const auto& spec : split_spec_list(specs)) {
    kernels.push_back(afa::parse_kernel_spec(spec, n));
    std::cout << sep << kernels.back().name;
  }
  std::cout << "\n";
  std::vector<double> scale(kernels.size(), 1.0);
  if (normalized) {
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      const double z = afa::interior_normalizer(kernels[i]);
      if (z > 0.0) scale[i] = 1.0 / z;
    }
  }
  for (int s = 1; s <= n; ++s) {
    std::cout << s;
    for (std::size_t i = 0; i < kernels.size(); ++i)
      std::cout << sep << fmt(kernels[i].w[s] * scale[i], d);
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive feature attributions from coalition kernels"};
  app.require_subcommand(1);

  std::string game_path, data_path, model_path, instance_vec;
  int instance_row = -1;
  std::string format = "table";
  std::string kernel_spec, kernels_csv;
  bool oracle_method = false, unconstrained = false, normalized = false;
  std::uint64_t seed = 42;
  int trials = 100, n_max = 6, kernels_n = 0;
  double tolerance = 1e-8;

  auto add_input_opts = [&](CLI::App* cmd) {
    cmd->add_option("--game", game_path, "coalition game JSON file");
    cmd->add_option("--data", data_path, "background dataset CSV file");
    cmd->add_option("--model", model_path, "prediction model JSON file");
    cmd->add_option("--instance", instance_row, "background row index to explain");
    cmd->add_option("--instance-vec", instance_vec, "explicit instance values v1,v2,...");
    cmd->add_option("--format", format)->check(CLI::IsMember({"table", "json", "csv"}));
  };

  CLI::App* attribute = app.add_subcommand("attribute", "compute one attribution");
  add_input_opts(attribute);
  attribute->add_option("--kernel", kernel_spec,
                        "kernel spec or reference method name")->required();
  std::string method = "closed";
  attribute->add_option("--method", method, "closed | oracle")
      ->check(CLI::IsMember({"closed", "oracle"}));
  attribute->add_flag("--unconstrained", unconstrained,
                      "drop the efficiency constraint");

  CLI::App* compare = app.add_subcommand("compare", "compare attributions side by side");
  add_input_opts(compare);
  compare->add_option("--kernels", kernels_csv,
                      "comma-separated kernel specs / method names")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--seed", seed);
  verify->add_option("--trials", trials);
  verify->add_option("--n-max", n_max);
  verify->add_option("--tolerance", tolerance, "deviation tolerance scale");

  CLI::App* kernels_cmd = app.add_subcommand("kernels", "print kernel weight tables");
  kernels_cmd->add_option("--n", kernels_n, "feature count")->required();
  kernels_cmd->add_option("--kernels", kernels_csv, "comma-separated kernel specs")->required();
  kernels_cmd->add_flag("--normalized", normalized, "display-only normalization");
  kernels_cmd->add_option("--format", format)->check(CLI::IsMember({"table", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (attribute->parsed()) {
      oracle_method = method == "oracle";
      const Inputs in = load_inputs(game_path, data_path, model_path,
                                    instance_row, instance_vec);
      return run_attribute(in, kernel_spec, oracle_method, unconstrained,
                           format, instance_row, instance_vec);
    }
    if (compare->parsed()) {
      const std::vector<std::string> specs = split_spec_list(kernels_csv);
      if (specs.size() < 2)
        throw UsageError("compare requires at least two kernel/method specs");
      const Inputs in = load_inputs(game_path, data_path, model_path,
                                    instance_row, instance_vec);
      std::vector<afa::Attribution> atts;
      for (const auto& spec : specs) {
        atts.push_back(spec == "lm"
                           ? compute_lm(in, instance_row, instance_vec)
                           : compute_one(in, spec, false, false));
      }
      render_compare(specs, atts, in, format);
      return 0;
    }
    if (verify->parsed()) {
      if (n_max < 2 || n_max > 8)
        throw UsageError("--n-max must be in 2..8");
      if (trials < 1) throw UsageError("--trials must be >= 1");
      return run_verify(seed, trials, n_max, tolerance);
    }
    if (kernels_cmd->parsed()) {
      if (kernels_n < 2 || kernels_n > afa::kMaxFeatures)
        throw UsageError("--n must be in 2..20");
      return run_kernels(kernels_n, kernels_csv, normalized, format);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const afa::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const afa::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

#include "slt/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "slt/bounds.hpp"
#include "slt/config.hpp"
#include "slt/datasets.hpp"
#include "slt/error.hpp"
#include "slt/experiments.hpp"
#include "slt/gaussian.hpp"
#include "slt/serialize.hpp"
#include "slt/solver.hpp"

namespace slt {

namespace {

// A flag value that may also come from the configuration file. The flag wins.
template <typename T>
struct Setting {
  T value{};
  CLI::Option* option = nullptr;
  bool given() const { return option != nullptr && option->count() > 0; }
};

template <typename T>
Setting<T>& add(CLI::App* sub, Setting<T>& s, const std::string& name,
                const std::string& help) {
  s.option = sub->add_option(name, s.value, help);
  return s;
}

struct Common {
  std::string config_path;
  Setting<std::uint64_t> seed;
  std::string out_path;
  ConfigFile cfg;

  void load() {
    if (!config_path.empty()) cfg = ConfigFile::load(config_path);
  }
  std::uint64_t seed_value() const {
    return seed.given() ? seed.value : cfg.get_uint("seed", 0);
  }
  double real(const Setting<double>& s, const std::string& key, double fallback) const {
    return s.given() ? s.value : cfg.get_real(key, fallback);
  }
  std::uint64_t uint(const Setting<std::uint64_t>& s, const std::string& key,
                     std::uint64_t fallback) const {
    return s.given() ? s.value : cfg.get_uint(key, fallback);
  }
  int integer(const Setting<int>& s, const std::string& key, int fallback) const {
    return s.given() ? s.value : cfg.get_int(key, fallback);
  }
  std::string text(const Setting<std::string>& s, const std::string& key,
                   const std::string& fallback) const {
    return s.given() ? s.value : cfg.get_string(key, fallback);
  }
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--config", common.config_path, "key = value configuration file");
  common.seed.option = sub->add_option("--seed", common.seed.value, "random seed");
  sub->add_option("--out", common.out_path, "output file");
}

std::string require_text(const std::string& value, const std::string& what) {
  if (value.empty()) throw InvalidInput(what + " is required");
  return value;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  return f;
}

// Writes to --out when given, else to the command's standard output.
void emit(const Common& common, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  if (common.out_path.empty()) {
    write(out);
  } else {
    auto f = open_output(common.out_path);
    write(f);
  }
}

std::vector<std::size_t> sizes_from(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  for (double v : values) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw InvalidInput(fmt::format("sample sizes must be positive integers, got {}", v));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  ConfigFile tmp;
  tmp.set("list", text);
  return *tmp.get_reals("list");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learning-theoretic bounds, SVM training and scaling experiments", "slt"};
  // --h is the VC dimension, so help is long-form only.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  Common common;

  // train
  auto* train = app.add_subcommand("train", "fit a model on a CSV or Wisconsin dataset");
  add_common(train, common);
  Setting<std::string> train_data, train_wisconsin, train_test, train_loss;
  Setting<int> train_degree;
  add(train, train_data, "--data", "CSV dataset with header x1,...,xd,y");
  add(train, train_wisconsin, "--wisconsin", "UCI breast-cancer-wisconsin.data file");
  add(train, train_test, "--test", "optional CSV test set");
  add(train, train_loss, "--loss", "hinge or squared");
  add(train, train_degree, "--degree", "polynomial degree, 1 for affine");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "VC bound and deviation calculators");
  add_common(bounds, common);
  Setting<double> b_n, b_h, b_delta, b_p, b_tau, b_J, b_eps, b_sigma;
  Setting<std::uint64_t> b_d;
  add(bounds, b_n, "--n", "sample size");
  add(bounds, b_h, "--h", "VC dimension");
  add(bounds, b_d, "--d", "input dimension; sets h = d + 2 when --h is absent");
  add(bounds, b_delta, "--delta", "failure probability");
  add(bounds, b_p, "--p", "moment order, > 2");
  add(bounds, b_tau, "--tau", "moment ratio, >= 1");
  add(bounds, b_J, "--J", "minimal in-class risk");
  add(bounds, b_eps, "--eps", "also report the sample size reaching this accuracy");
  add(bounds, b_sigma, "--sigma", "also report the Chebyshev deviation for this spread");

  // complexity
  auto* complexity = app.add_subcommand("complexity", "sample size for a target accuracy");
  add_common(complexity, common);
  Setting<double> c_eps, c_delta, c_J, c_tau, c_p, c_h;
  Setting<std::uint64_t> c_d;
  add(complexity, c_eps, "--eps", "target accuracy");
  add(complexity, c_delta, "--delta", "failure probability");
  add(complexity, c_d, "--d", "input dimension");
  add(complexity, c_h, "--h", "VC dimension for the numeric inversion (default d + 2)");
  add(complexity, c_J, "--J", "minimal in-class risk");
  add(complexity, c_tau, "--tau", "moment ratio");
  add(complexity, c_p, "--p", "moment order");

  // gauss-sim
  auto* gauss = app.add_subcommand("gauss-sim", "Gaussian pair: Bayes surface and risks");
  add_common(gauss, common);
  Setting<std::uint64_t> g_nmc, g_ntrain;
  Setting<int> g_k;
  Setting<std::string> g_norm;
  add(gauss, g_nmc, "--n-mc", "Monte Carlo draws per class");
  add(gauss, g_k, "--k", "also estimate the algorithmic error of degree k");
  add(gauss, g_ntrain, "--n-train", "training size for the degree-k proxy");
  add(gauss, g_norm, "--norm", "frobenius or spectral");

  // rates
  auto* rates = app.add_subcommand("rates", "convergence-rate experiments");
  add_common(rates, common);
  Setting<std::string> r_mode, r_ns;
  Setting<std::uint64_t> r_trials, r_nmc;
  Setting<int> r_k;
  add(rates, r_mode, "--mode", "decomposition, excess or deviation");
  add(rates, r_ns, "--ns", "comma-separated sample sizes");
  add(rates, r_trials, "--trials", "trials per sample size");
  add(rates, r_nmc, "--n-mc", "Monte Carlo draws per class");
  add(rates, r_k, "--k", "polynomial degree for the decomposition");

  // scale
  auto* scale = app.add_subcommand("scale", "search the degree k for a sample size n");
  add_common(scale, common);
  Setting<std::uint64_t> s_n, s_trials, s_nmc;
  Setting<int> s_kmax;
  add(scale, s_n, "--n", "sample size");
  add(scale, s_kmax, "--k-max", "largest degree");
  add(scale, s_trials, "--trials", "trials per degree");
  add(scale, s_nmc, "--n-mc", "Monte Carlo draws per class");

  // wisconsin
  auto* wisconsin = app.add_subcommand("wisconsin", "three-pipeline Wisconsin comparison");
  add_common(wisconsin, common);
  Setting<std::string> w_data;
  Setting<std::uint64_t> w_reps, w_ntrain, w_features;
  add(wisconsin, w_data, "--data", "UCI breast-cancer-wisconsin.data file");
  add(wisconsin, w_reps, "--repetitions", "number of seeded splits");
  add(wisconsin, w_ntrain, "--n-train", "training records per split");
  add(wisconsin, w_features, "--features", "features kept by selection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    common.load();
    const ConfigFile& cfg = common.cfg;
    const std::uint64_t seed = common.seed_value();

    if (*train) {
      const std::string csv = common.text(train_data, "data", "");
      const std::string wis = common.text(train_wisconsin, "wisconsin", "");
      if (csv.empty() == wis.empty()) {
        throw InvalidInput("give exactly one of --data or --wisconsin");
      }
      const Dataset data = csv.empty() ? load_wisconsin(wis).data : load_csv_dataset(csv);
      SolverConfig solver = solver_from_config(cfg);
      solver.seed = seed;
      LossSpec loss = loss_from_config(cfg, LossSpec::hinge());
      if (train_loss.given()) {
        ConfigFile tmp;
        tmp.set("loss", train_loss.value);
        loss = loss_from_config(tmp, loss);
      }
      const int k = common.integer(train_degree, "degree", 1);
      const TrainedModel model =
          k == 1 ? train_linear(data, loss, solver) : train_polynomial(data, k, loss, solver);
      out << summary_line(model) << '\n';
      if (data.is_classification()) {
        out << fmt::format("train_error={}\n",
                           format_real(confusion(data, model.separator).error_rate()));
      }
      const std::string test_path = common.text(train_test, "test", "");
      if (!test_path.empty()) {
        const Dataset test = load_csv_dataset(test_path);
        out << fmt::format("test_risk={}\n",
                           format_real(empirical_risk(test, model.separator, loss)));
        if (test.is_classification()) {
          out << fmt::format("test_error={}\n",
                             format_real(confusion(test, model.separator).error_rate()));
        }
      }
      if (!common.out_path.empty()) {
        auto f = open_output(common.out_path);
        write_separator(f, model.separator);
      }
      return kExitOk;
    }

    if (*bounds) {
      VapnikBoundInputs in;
      if (!b_n.given() && !cfg.has("n")) throw InvalidInput("--n is required");
      in.n = common.real(b_n, "n", 1.0);
      if (b_h.given() || cfg.has("h")) {
        in.h = common.real(b_h, "h", 1.0);
      } else if (b_d.given() || cfg.has("d")) {
        in.h = static_cast<double>(vc_dim_hinge_loss_family(common.uint(b_d, "d", 1)));
      } else {
        throw InvalidInput("--h or --d is required");
      }
      in.delta = common.real(b_delta, "delta", 0.05);
      in.p = common.real(b_p, "p", 4.0);
      in.tau = common.real(b_tau, "tau", 1.0);
      in.J = common.real(b_J, "J", 1.0);
      std::ostringstream text;
      text << format_bound_report(vapnik_relative_bound(in)) << '\n';
      if (b_sigma.given() || cfg.has("sigma")) {
        text << fmt::format(
            "chebyshev={}\n",
            format_real(chebyshev_deviation_bound(common.real(b_sigma, "sigma", 0.0),
                                                  in.delta, in.n)));
      }
      if (b_eps.given() || cfg.has("eps")) {
        text << fmt::format("n_required={}\n",
                            info_complexity_numeric(common.real(b_eps, "eps", 0.1),
                                                    in.delta, in.h, in.J, in.tau, in.p));
      }
      emit(common, out, [&](std::ostream& o) { o << text.str(); });
      return kExitOk;
    }

    if (*complexity) {
      if (!c_eps.given() && !cfg.has("eps")) throw InvalidInput("--eps is required");
      const double eps = common.real(c_eps, "eps", 0.1);
      const double delta = common.real(c_delta, "delta", 0.05);
      const std::size_t d = common.uint(c_d, "d", 1);
      const double J = common.real(c_J, "J", 1.0);
      const double tau = common.real(c_tau, "tau", 1.0);
      const double p = common.real(c_p, "p", 4.0);
      const double h = common.real(c_h, "h", static_cast<double>(vc_dim_hinge_loss_family(d)));
      const std::uint64_t n = info_complexity_numeric(eps, delta, h, J, tau, p);
      const std::optional<double> asym =
          info_complexity_asymptotic(eps, delta, d, J, tau, p);
      std::string line = fmt::format("numeric_n={} ", n);
      if (!asym.has_value()) {
        line += "asymptotic=n/a ratio=n/a (eps >= 1/e)";
      } else if (const double a = asym.value(); a > 0.0) {
        line += fmt::format("asymptotic={} ratio={}", format_real(a),
                            format_real(static_cast<double>(n) / a));
      } else {
        line += fmt::format("asymptotic={} ratio=n/a", format_real(a));
      }
      emit(common, out, [&](std::ostream& o) { o << line << '\n'; });
      return kExitOk;
    }

    if (*gauss) {
      const GaussianPair pair = pair_from_config(cfg);
      const std::size_t n_mc = common.uint(g_nmc, "n_mc", 100'000);
      const std::string norm_name = common.text(g_norm, "norm", "frobenius");
      MatrixNorm norm;
      if (norm_name == "frobenius") {
        norm = MatrixNorm::Frobenius;
      } else if (norm_name == "spectral") {
        norm = MatrixNorm::Spectral;
      } else {
        throw InvalidInput("norm must be 'frobenius' or 'spectral'");
      }
      const QuadraticSurface q = bayes_quadratic_surface(pair);
      emit(common, out, [&](std::ostream& o) { write_quadratic(o, q); });
      out << fmt::format("criterion={} norm={}\n", format_real(sigma_criterion(pair, norm)),
                         norm_name);
      const RiskEstimate risk = weighted_risk_mc(pair, as_classifier(q), n_mc, seed);
      out << fmt::format("bayes_risk={} se={}\n", format_real(risk.estimate),
                         format_real(risk.standard_error));
      if (g_k.given() || cfg.has("k")) {
        const int k = common.integer(g_k, "k", 1);
        ExperimentOptions options;
        options.solver = solver_from_config(cfg, options.solver);
        const auto alg = algorithmic_error_estimate(
            pair, k, common.uint(g_ntrain, "n_train", options.n_large), n_mc, seed,
            loss_from_config(cfg, LossSpec::hinge()), options.solver);
        out << fmt::format("e_alg={} raw={} se={} k={}\n", format_real(alg.value),
                           format_real(alg.raw), format_real(alg.standard_error), k);
      }
      return kExitOk;
    }

    if (*rates) {
      const GaussianPair pair = pair_from_config(cfg);
      const std::string mode = common.text(r_mode, "mode", "decomposition");
      RateCheckConfig rc;
      const std::string ns_text = common.text(r_ns, "ns", "");
      if (!ns_text.empty()) rc.ns = sizes_from(parse_list(ns_text));
      rc.seed = seed;
      ExperimentOptions options;
      options.solver = solver_from_config(cfg, options.solver);
      options.n_large = cfg.get_uint("n_large", options.n_large);
      options.delta = cfg.get_real("delta", options.delta);
      options.p = cfg.get_real("p", options.p);

      if (mode == "decomposition") {
        rc.trials = common.uint(r_trials, "trials", 10);
        const std::size_t n_mc = common.uint(r_nmc, "n_mc", 100'000);
        const int k = common.integer(r_k, "k", 1);
        const LossSpec loss = loss_from_config(cfg, LossSpec::hinge());
        std::vector<DecompositionReport> rows;
        for (std::size_t n : rc.ns) {
          rows.push_back(estimate_error_decomposition(pair, loss, n, k, rc.trials, n_mc,
                                                      seed, options));
        }
        emit(common, out, [&](std::ostream& o) { write_decomposition_csv(o, rows); });
        std::vector<std::pair<double, double>> points;
        for (const auto& r : rows) points.emplace_back(static_cast<double>(r.n), r.e_inf);
        try {
          out << "# e_inf (ERM-proxy) " << format_rate_fit(fit_rate(points)) << '\n';
        } catch (const InvalidInput& e) {
          out << "# e_inf (ERM-proxy) exponent=n/a (" << e.what() << ")\n";
        }
        return kExitOk;
      }
      if (mode == "excess") {
        rc.trials = common.uint(r_trials, "trials", 200);
        const ExcessRiskRate rate = squared_loss_excess_rate(pair, rc);
        emit(common, out, [&](std::ostream& o) {
          o << "n,mean_excess,se\n";
          for (std::size_t i = 0; i < rc.ns.size(); ++i) {
            o << rc.ns[i] << ',' << format_real(rate.mean_excess[i]) << ','
              << format_real(rate.excess_se[i]) << '\n';
          }
        });
        out << "# squared-loss excess risk " << format_rate_fit(rate.fit) << '\n';
        return kExitOk;
      }
      if (mode == "deviation") {
        rc.trials = common.uint(r_trials, "trials", 200);
        AffineSeparator g;
        g.w = cfg.get_reals("g.w").value_or(std::vector<double>(pair.dim(), 1.0));
        g.b = cfg.get_real("g.b", 0.0);
        const RateCheckReport report =
            rate_optimality_check(pair, g, loss_from_config(cfg, LossSpec::hinge()), rc);
        emit(common, out, [&](std::ostream& o) {
          o << "n,mean_deviation\n";
          for (const auto& [n, e] : report.fit.points) {
            o << static_cast<std::size_t>(n) << ',' << format_real(e) << '\n';
          }
        });
        out << "# deviation " << format_rate_fit(report.fit)
            << (report.passed ? " passed" : " failed") << '\n';
        return kExitOk;
      }
      throw InvalidInput("mode must be decomposition, excess or deviation");
    }

    if (*scale) {
      const GaussianPair pair = pair_from_config(cfg);
      ExperimentOptions options;
      options.solver = solver_from_config(cfg, options.solver);
      options.n_large = cfg.get_uint("n_large", options.n_large);
      const ScaleSearchResult result = scale_search(
          pair, loss_from_config(cfg, LossSpec::hinge()), common.uint(s_n, "n", 10'000),
          common.integer(s_kmax, "k_max", 3), common.uint(s_trials, "trials", 10), seed,
          common.uint(s_nmc, "n_mc", 100'000), options);
      emit(common, out, [&](std::ostream& o) { write_decomposition_csv(o, result.table); });
      out << "# best_k=" << result.best_k << '\n';
      return kExitOk;
    }

    if (*wisconsin) {
      ExperimentConfig config = experiment_from_config(cfg);
      if (w_data.given()) config.dataset_path = w_data.value;
      require_text(config.dataset_path, "--data (or 'dataset' in the config)");
      if (common.seed.given()) config.seed = common.seed.value;
      if (w_reps.given()) config.repetitions = w_reps.value;
      if (w_ntrain.given()) config.n_train = w_ntrain.value;
      if (w_features.given()) config.feature_count = w_features.value;
      config.validate();
      const TableReport report = reproduce_table(config);
      print_table(out, report, config);
      if (!common.out_path.empty()) {
        auto f = open_output(common.out_path);
        f << "seed,selected,err_linear_all,err_linear_reduced,err_poly_reduced\n";
        for (const auto& run : report.runs) {
          std::string selected;
          for (std::size_t i = 0; i < run.selected.size(); ++i) {
            selected += (i ? " " : "") + std::to_string(run.selected[i] + 1);
          }
          f << run.seed << ',' << selected << ','
            << format_real(run.linear_all.error_rate()) << ','
            << format_real(run.linear_reduced.error_rate()) << ','
            << format_real(run.poly_reduced.error_rate()) << '\n';
        }
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Numerical ? kExitNumerical : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace slt

#include "slt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "slt/bounds.hpp"
#include "slt/error.hpp"
#include "slt/parallel.hpp"
#include "slt/random.hpp"
#include "slt/serialize.hpp"

namespace slt {

namespace {

constexpr const char* kCsvHeader =
    "n,k,e_inf,e_inf_se,e_alg,e_alg_se,e_total,e_total_se,bound";

// Stream tags keep the draws of different experiment stages independent.
constexpr std::uint64_t kTrialStream = 0x7a11;
constexpr std::uint64_t kClassStream = 0xa19;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  MeanSe out;
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double e : v) ss += (e - out.mean) * (e - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

TrainedModel train_degree(const Dataset& data, int k, const LossSpec& loss,
                          const SolverConfig& config) {
  return k == 1 ? train_linear(data, loss, config)
                : train_polynomial(data, k, loss, config);
}

}  // namespace

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw InvalidInput("a rate fit needs at least 4 points");
  std::set<double> seen;
  for (const auto& [n, e] : points) {
    if (!std::isfinite(n) || n < 1.0) throw InvalidInput("sample sizes must be >= 1");
    if (!std::isfinite(e) || e <= 0.0) {
      throw InvalidInput("errors must be positive to take logarithms");
    }
    if (!seen.insert(n).second) throw InvalidInput("sample sizes must be distinct");
  }
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, e] : points) {
    sx += std::log(n);
    sy += std::log(e);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [n, e] : points) {
    const double dx = std::log(n) - mx;
    const double dy = std::log(e) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points.assign(points.begin(), points.end());
  return fit;
}

DecompositionReport estimate_error_decomposition(const GaussianPair& pair,
                                                 const LossSpec& loss,
                                                 std::size_t n, int k,
                                                 std::size_t trials,
                                                 std::size_t n_mc,
                                                 std::uint64_t seed,
                                                 const ExperimentOptions& options) {
  if (trials < 10) throw InvalidInput("the decomposition needs at least 10 trials");
  if (n < 1) throw InvalidInput("sample size must be at least 1");
  if (k < 1) throw InvalidInput("degree must be at least 1");

  // The class seed does not depend on k, so every k shares the proxy's
  // training draws and all risks share one set of Monte Carlo draws.
  const std::uint64_t class_seed = derive_seed(seed, kClassStream);
  const std::uint64_t mc_seed = derive_seed(class_seed, 1);
  const AlgorithmicErrorEstimate alg = algorithmic_error_estimate(
      pair, k, options.n_large, n_mc, class_seed, loss, options.solver);

  const QuadraticSurface bayes = bayes_quadratic_surface(pair);
  std::vector<double> total(trials), inf(trials), mc_se(trials), risks(trials);
  std::vector<Separator> models(trials);
  parallel_for(trials, [&](std::size_t t) {
    const Dataset data = sample_pair(pair, n, derive_seed(seed, kTrialStream, t));
    models[t] = train_degree(data, k, loss, options.solver).separator;
    const auto diff = paired_risk_difference_mc(pair, as_classifier(models[t]),
                                                as_classifier(bayes), n_mc, mc_seed);
    risks[t] = diff.first.estimate;
    total[t] = diff.difference;
    inf[t] = diff.first.estimate - alg.model_risk;
    mc_se[t] = diff.standard_error;
  });

  const MeanSe tot = mean_and_se(total);
  const MeanSe inf_stats = mean_and_se(inf);
  const double mc = std::accumulate(mc_se.begin(), mc_se.end(), 0.0) /
                    static_cast<double>(trials);

  DecompositionReport r;
  r.n = n;
  r.k = k;
  r.model_risk = mean_and_se(risks).mean;
  r.best_in_class_risk = alg.model_risk;
  r.bayes_risk = alg.bayes_risk;
  r.e_total = tot.mean;
  r.e_total_se = std::sqrt(tot.se * tot.se + mc * mc);
  r.e_alg = alg.value;
  r.e_alg_se = alg.standard_error;
  r.e_inf = inf_stats.mean;
  r.e_inf_se = std::sqrt(inf_stats.se * inf_stats.se + mc * mc +
                         alg.standard_error * alg.standard_error);

  // Plug-in constants on the proxy's training draws.
  const Dataset reference = sample_pair(pair.with_priors(pair.beta1()),
                                        std::min<std::size_t>(options.n_large, 20'000),
                                        derive_seed(class_seed, 0));
  std::vector<Separator> candidates = models;
  candidates.push_back(alg.surrogate_model);
  const double tau = plugin_tau(reference, candidates, loss, options.p);
  r.bound = scaled_class_bound(pair.dim(), static_cast<double>(n), k, options.delta,
                            options.p, tau, alg.surrogate_risk, r.e_alg);
  return r;
}

ScaleSearchResult scale_search(const GaussianPair& pair, const LossSpec& loss,
                               std::size_t n, int k_max, std::size_t trials,
                               std::uint64_t seed, std::size_t n_mc,
                               const ExperimentOptions& options) {
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  for (int k = 1; k <= k_max; ++k) {
    if (monomial_count(pair.dim(), k) - 1 > options.solver.dimension_cap) {
      throw DimensionCapExceeded(fmt::format(
          "degree {} exceeds the lifted dimension cap {}", k, options.solver.dimension_cap));
    }
  }
  ScaleSearchResult result;
  for (int k = 1; k <= k_max; ++k) {
    result.table.push_back(
        estimate_error_decomposition(pair, loss, n, k, trials, n_mc, seed, options));
  }
  const auto best = std::min_element(
      result.table.begin(), result.table.end(),
      [](const auto& a, const auto& b) { return a.e_total < b.e_total; });
  const double cutoff = best->e_total + best->e_total_se;
  for (const auto& row : result.table) {
    if (row.e_total <= cutoff) {
      result.best_k = row.k;
      break;
    }
  }
  return result;
}

std::uint64_t scaled_vc_dimension(std::size_t d, int k) {
  if (d < 1) throw InvalidInput("dimension must be >= 1");
  if (k < 1) throw InvalidInput("degree must be >= 1");
  return monomial_count(d, k) + 1;
}

double scaled_class_bound(std::size_t d, double n, int k, double delta, double p,
                       double tau_k, double J_k, double e_alg_k, double h) {
  if (!std::isfinite(e_alg_k) || e_alg_k < 0.0) {
    throw InvalidInput("algorithmic error must be >= 0");
  }
  VapnikBoundInputs in;
  in.n = n;
  in.h = h > 0.0 ? h : static_cast<double>(scaled_vc_dimension(d, k));
  in.delta = delta;
  in.p = p;
  in.tau = tau_k;
  in.J = J_k;
  const BoundReport report = vapnik_relative_bound(in);
  if (!report.in_valid_regime) return std::numeric_limits<double>::infinity();
  return report.bound_value + e_alg_k;
}

RateCheckReport rate_optimality_check(const GaussianPair& pair,
                                      const AffineSeparator& g,
                                      const LossSpec& loss,
                                      const RateCheckConfig& config) {
  if (config.trials < 1) throw InvalidInput("need at least one trial");
  const double exact = gaussian_affine_loss_risk(pair, g, loss);

  // The lower rate only concerns losses that are not almost surely constant.
  {
    const Dataset pilot = sample_pair(pair, 1000, derive_seed(config.seed, 0xb1));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : pilot) {
      const double v = eval_loss(loss, eval_separator(g, s.x), s.y);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(hi > lo)) throw InvalidInput("the loss is constant on the sample");
  }

  std::vector<std::pair<double, double>> points;
  for (std::size_t n : config.ns) {
    std::vector<double> deviation(config.trials);
    parallel_for(config.trials, [&](std::size_t t) {
      const Dataset data = sample_pair(pair, n, derive_seed(config.seed, n, t));
      deviation[t] = std::abs(empirical_risk(data, g, loss) - exact);
    });
    points.emplace_back(static_cast<double>(n), mean_and_se(deviation).mean);
  }
  RateCheckReport report;
  report.fit = fit_rate(points);
  report.exact_risk = exact;
  report.passed = report.fit.exponent >= config.threshold;
  return report;
}

AffineSeparator population_least_squares(const GaussianPair& pair) {
  const auto d = static_cast<Eigen::Index>(pair.dim());
  const double p1 = pair.pi1();
  const double p2 = pair.pi2();
  const auto& a = pair.positive();
  const auto& b = pair.negative();
  // Normal equations in z = (1, x): E[z z^T] theta = E[z y].
  Eigen::MatrixXd m(d + 1, d + 1);
  Eigen::VectorXd rhs(d + 1);
  const Eigen::VectorXd mean = p1 * a.mean() + p2 * b.mean();
  const Eigen::MatrixXd second = p1 * (a.cov() + a.mean() * a.mean().transpose()) +
                                 p2 * (b.cov() + b.mean() * b.mean().transpose());
  m(0, 0) = 1.0;
  m.block(0, 1, 1, d) = mean.transpose();
  m.block(1, 0, d, 1) = mean;
  m.block(1, 1, d, d) = second;
  rhs(0) = p1 - p2;
  rhs.tail(d) = p1 * a.mean() - p2 * b.mean();
  const Eigen::VectorXd theta = m.ldlt().solve(rhs);
  AffineSeparator sep;
  sep.b = theta(0);
  sep.w.assign(theta.data() + 1, theta.data() + 1 + d);
  return sep;
}

ExcessRiskRate squared_loss_excess_rate(const GaussianPair& pair,
                                        const RateCheckConfig& config,
                                        const SolverConfig& solver) {
  if (config.trials < 2) throw InvalidInput("need at least two trials per size");
  const LossSpec loss = LossSpec::squared();
  const AffineSeparator best = population_least_squares(pair);
  ExcessRiskRate out;
  out.minimal_risk = gaussian_affine_loss_risk(pair, best, loss);
  std::vector<std::pair<double, double>> points;
  for (std::size_t n : config.ns) {
    std::vector<double> excess(config.trials);
    parallel_for(config.trials, [&](std::size_t t) {
      const Dataset data = sample_pair(pair, n, derive_seed(config.seed, n, t));
      const TrainedModel m = train_linear(data, loss, solver);
      const auto& sep = std::get<AffineSeparator>(m.separator);
      excess[t] = gaussian_affine_loss_risk(pair, sep, loss) - out.minimal_risk;
    });
    const MeanSe s = mean_and_se(excess);
    out.mean_excess.push_back(s.mean);
    out.excess_se.push_back(s.se);
    points.emplace_back(static_cast<double>(n), s.mean);
  }
  out.fit = fit_rate(points);
  return out;
}

void write_decomposition_csv(std::ostream& out,
                             std::span<const DecompositionReport> reports) {
  out << kCsvHeader << '\n';
  for (const auto& r : reports) {
    out << r.n << ',' << r.k << ',' << format_real(r.e_inf) << ','
        << format_real(r.e_inf_se) << ',' << format_real(r.e_alg) << ','
        << format_real(r.e_alg_se) << ',' << format_real(r.e_total) << ','
        << format_real(r.e_total_se) << ',' << format_real(r.bound) << '\n';
  }
}

std::vector<DecompositionReport> read_decomposition_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("expected header '" + std::string(kCsvHeader) + "'", line_no);
  }
  std::vector<DecompositionReport> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw ParseError("expected 9 fields", line_no);
    DecompositionReport r;
    try {
      r.n = std::stoull(fields[0]);
      r.k = std::stoi(fields[1]);
      r.e_inf = parse_real(fields[2]);
      r.e_inf_se = parse_real(fields[3]);
      r.e_alg = parse_real(fields[4]);
      r.e_alg_se = parse_real(fields[5]);
      r.e_total = parse_real(fields[6]);
      r.e_total_se = parse_real(fields[7]);
      r.bound = parse_real(fields[8]);
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad field: ") + e.what(), line_no);
    }
    rows.push_back(r);
  }
  return rows;
}

std::string format_rate_fit(const RateFit& fit) {
  return fmt::format("exponent={} intercept={} r2={} points={}",
                     format_real(fit.exponent), format_real(fit.intercept),
                     format_real(fit.r_squared), fit.points.size());
}

}  // namespace slt

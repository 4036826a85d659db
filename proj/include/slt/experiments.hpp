#pragma once

// Experiment harnesses: log-log rate fits, the information/algorithmic error
// decomposition on Gaussian pairs, the degree-versus-sample-size search, and
// the scaled polynomial bound.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slt/gaussian.hpp"
#include "slt/model.hpp"
#include "slt/solver.hpp"

namespace slt {

struct RateFit {
  double exponent = 0.0;   // slope of ln(error) against ln(n)
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
};

// Ordinary least squares on (ln n, ln error). Needs >= 4 points with
// distinct n >= 1 and errors > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct ExperimentOptions {
  SolverConfig solver = [] {
    SolverConfig c;
    c.max_iterations = 2000;
    c.tolerance = 1e-6;
    return c;
  }();
  // Training size for the best-in-class proxy g_k.
  std::size_t n_large = 100'000;
  // Bound parameters for the scaled polynomial bound column.
  double delta = 0.05;
  double p = 4.0;
};

// Estimates carry the "ERM-proxy" label: the infimum over algorithms in the
// information error is replaced by the trained empirical risk minimizer.
struct DecompositionReport {
  std::size_t n = 0;
  int k = 0;
  double e_inf = 0.0;
  double e_inf_se = 0.0;
  double e_alg = 0.0;
  double e_alg_se = 0.0;
  double e_total = 0.0;
  double e_total_se = 0.0;
  double bound = 0.0;         // scaled polynomial bound, +inf out of regime
  double model_risk = 0.0;    // mean weighted risk of the trained models
  double best_in_class_risk = 0.0;
  double bayes_risk = 0.0;
};

// Over `trials` seeded datasets of size n (trial t uses the same draws for
// every k): train a degree-k model with `loss`, estimate its weighted risk by
// Monte Carlo. The best-in-class proxy and the Bayes surface are scored on the
// same Monte Carlo draws, so e_total = e_inf + e_alg before e_alg is clamped
// at zero.
DecompositionReport estimate_error_decomposition(const GaussianPair& pair,
                                                 const LossSpec& loss,
                                                 std::size_t n, int k,
                                                 std::size_t trials,
                                                 std::size_t n_mc,
                                                 std::uint64_t seed,
                                                 const ExperimentOptions& options = {});

struct ScaleSearchResult {
  int best_k = 1;
  std::vector<DecompositionReport> table;  // k = 1..k_max
};

// e(n, k) for k = 1..k_max. best_k is the smallest k whose total error is
// within one standard error of the minimum, so near-ties go to the simpler
// class.
ScaleSearchResult scale_search(const GaussianPair& pair, const LossSpec& loss,
                               std::size_t n, int k_max, std::size_t trials,
                               std::uint64_t seed, std::size_t n_mc = 100'000,
                               const ExperimentOptions& options = {});

// h(k) = monomial_count(d, k) + 1, which is d + 2 at k = 1.
std::uint64_t scaled_vc_dimension(std::size_t d, int k);

// J_k tau_k a(p) sqrt(E) / (1 - tau_k a(p) sqrt(E))_+ + e_alg(k), with the
// O(1/n) term dropped; +inf out of regime. h defaults to scaled_vc_dimension.
double scaled_class_bound(std::size_t d, double n, int k, double delta, double p,
                       double tau_k, double J_k, double e_alg_k, double h = 0.0);

struct RateCheckConfig {
  std::vector<std::size_t> ns{128, 256, 512, 1024, 2048, 4096, 8192, 16384};
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double threshold = -0.6;
};

struct RateCheckReport {
  RateFit fit;
  double exact_risk = 0.0;
  bool passed = false;  // fit.exponent >= threshold
};

// Mean |R(g) - R_hat(g)| for a fixed affine g on samples of each size, with
// R(g) in closed form (hinge or squared loss). Fails InvalidInput when the
// loss is constant on a pilot sample.
RateCheckReport rate_optimality_check(const GaussianPair& pair,
                                      const AffineSeparator& g,
                                      const LossSpec& loss,
                                      const RateCheckConfig& config);

// Population least-squares affine fit of y on x under the prior mixture.
AffineSeparator population_least_squares(const GaussianPair& pair);

struct ExcessRiskRate {
  RateFit fit;
  std::vector<double> mean_excess;  // per n
  std::vector<double> excess_se;
  double minimal_risk = 0.0;        // R(g_1)
};

// Squared-loss ERM over affine functions: mean exact excess risk
// R(g_hat) - R(g_1) over `trials` samples per n, then a log-log fit.
ExcessRiskRate squared_loss_excess_rate(const GaussianPair& pair,
                                        const RateCheckConfig& config,
                                        const SolverConfig& solver = {});

// Header "n,k,e_inf,e_inf_se,e_alg,e_alg_se,e_total,e_total_se,bound" and one
// row per report with 17 significant digits.
void write_decomposition_csv(std::ostream& out,
                             std::span<const DecompositionReport> reports);
std::vector<DecompositionReport> read_decomposition_csv(std::istream& in);

// "exponent=<v> intercept=<v> r2=<v> points=<n>"
std::string format_rate_fit(const RateFit& fit);

}  // namespace slt

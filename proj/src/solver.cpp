#include "slt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <Eigen/Dense>

#include <fmt/format.h>

#include "slt/error.hpp"
#include "slt/parallel.hpp"
#include "slt/random.hpp"
#include "slt/serialize.hpp"

namespace slt {

namespace {

// Gram-matrix shortcut for squared loss is used up to this many columns.
constexpr std::size_t kGramColumnLimit = 512;

// Row-major n x D design; column 0 is the constant monomial.
struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> z;
  std::vector<double> y;

  double* row(std::size_t i) { return z.data() + i * cols; }
  const double* row(std::size_t i) const { return z.data() + i * cols; }
};

Design affine_design(const Dataset& data) {
  Design d;
  d.rows = data.size();
  d.cols = data.dim() + 1;
  d.z.resize(d.rows * d.cols);
  d.y.resize(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i) {
    double* r = d.row(i);
    r[0] = 1.0;
    std::copy(data[i].x.begin(), data[i].x.end(), r + 1);
    d.y[i] = data[i].y;
  }
  return d;
}

Design lifted_design(const Dataset& data, const MonomialBasis& basis) {
  Design d;
  d.rows = data.size();
  d.cols = basis.size();
  d.z.resize(d.rows * d.cols);
  d.y.resize(d.rows);
  for (std::size_t i = 0; i < d.rows; ++i) {
    basis.lift_into(data[i].x, std::span<double>(d.row(i), d.cols));
    d.y[i] = data[i].y;
  }
  return d;
}

// Whitening of the non-constant columns: z' = (1, T (z - shift)). With
// T = Lambda^{-1/2} V^T from the eigendecomposition of their covariance, the
// second-moment matrix of z' is the identity, so the subgradient steps are
// well conditioned. Directions without variance in the data are dropped.
// Designs wider than kWhitenColumnLimit get per-column standardization.
constexpr std::size_t kWhitenColumnLimit = 1024;

struct Preconditioner {
  std::vector<double> shift;   // length cols - 1
  Eigen::MatrixXd transform;   // rank x (cols - 1)
};

Preconditioner whiten(Design& d) {
  const std::size_t p = d.cols - 1;
  const double n = static_cast<double>(d.rows);
  Preconditioner pre;
  pre.shift.assign(p, 0.0);
  for (std::size_t i = 0; i < d.rows; ++i) {
    const double* r = d.row(i);
    for (std::size_t j = 0; j < p; ++j) pre.shift[j] += r[j + 1];
  }
  for (double& m : pre.shift) m /= n;

  if (p > kWhitenColumnLimit) {
    pre.transform = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                          static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
      double var = 0.0;
      for (std::size_t i = 0; i < d.rows; ++i) {
        const double c = d.row(i)[j + 1] - pre.shift[j];
        var += c * c;
      }
      const double sd = std::sqrt(var / n);
      const auto jj = static_cast<Eigen::Index>(j);
      pre.transform(jj, jj) = sd > 1e-12 * (1.0 + std::abs(pre.shift[j])) ? 1.0 / sd : 0.0;
    }
  } else {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                                static_cast<Eigen::Index>(p));
    Eigen::VectorXd c(static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < d.rows; ++i) {
      const double* r = d.row(i);
      for (std::size_t j = 0; j < p; ++j) c(static_cast<Eigen::Index>(j)) = r[j + 1] - pre.shift[j];
      cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
    }
    cov = cov.selfadjointView<Eigen::Lower>();
    cov /= n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double top = values.size() > 0 ? std::max(values.maxCoeff(), 0.0) : 0.0;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = values.size() - 1; k >= 0; --k) {
      if (values(k) > 1e-10 * top && values(k) > 0.0) keep.push_back(k);
    }
    pre.transform.resize(static_cast<Eigen::Index>(keep.size()),
                         static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < keep.size(); ++r) {
      pre.transform.row(static_cast<Eigen::Index>(r)) =
          eig.eigenvectors().col(keep[r]).transpose() / std::sqrt(values(keep[r]));
    }
  }

  const auto rank = static_cast<std::size_t>(pre.transform.rows());
  Design out;
  out.rows = d.rows;
  out.cols = rank + 1;
  out.z.resize(out.rows * out.cols);
  out.y = std::move(d.y);
  Eigen::VectorXd centered(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < d.rows; ++i) {
    const double* r = d.row(i);
    for (std::size_t j = 0; j < p; ++j) centered(static_cast<Eigen::Index>(j)) = r[j + 1] - pre.shift[j];
    const Eigen::VectorXd mapped = pre.transform * centered;
    double* o = out.row(i);
    o[0] = 1.0;
    for (std::size_t j = 0; j < rank; ++j) o[j + 1] = mapped(static_cast<Eigen::Index>(j));
  }
  d = std::move(out);
  return pre;
}

// theta in whitened coordinates -> coefficients on the original columns.
std::vector<double> unwhiten(const std::vector<double>& theta,
                             const Preconditioner& pre) {
  const std::size_t p = pre.shift.size();
  Eigen::VectorXd t(pre.transform.rows());
  for (Eigen::Index r = 0; r < t.size(); ++r) t(r) = theta[static_cast<std::size_t>(r) + 1];
  const Eigen::VectorXd w = pre.transform.transpose() * t;
  std::vector<double> out(p + 1);
  double constant = theta[0];
  for (std::size_t j = 0; j < p; ++j) {
    out[j + 1] = w(static_cast<Eigen::Index>(j));
    constant -= out[j + 1] * pre.shift[j];
  }
  out[0] = constant;
  return out;
}

// Largest eigenvalue of Z^T Z / n by power iteration from the all-ones vector.
double top_eigenvalue(const Design& d) {
  std::vector<double> v(d.cols, 1.0 / std::sqrt(static_cast<double>(d.cols)));
  std::vector<double> next(d.cols);
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < d.rows; ++i) {
      const double* r = d.row(i);
      double dot = 0.0;
      for (std::size_t j = 0; j < d.cols; ++j) dot += r[j] * v[j];
      for (std::size_t j = 0; j < d.cols; ++j) next[j] += dot * r[j];
    }
    double norm = 0.0;
    for (double e : next) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    const double new_lambda = norm / static_cast<double>(d.rows);
    for (std::size_t j = 0; j < d.cols; ++j) v[j] = next[j] / norm;
    if (std::abs(new_lambda - lambda) <= 1e-9 * new_lambda) return new_lambda;
    lambda = new_lambda;
  }
  return lambda;
}

double curvature_factor(const LossSpec& loss) {
  switch (loss.kind()) {
    case LossSpec::Kind::Hinge:
      return 1.0;
    case LossSpec::Kind::Squared:
      return 2.0;
    case LossSpec::Kind::Polynomial:
    case LossSpec::Kind::ClippedPolynomial: {
      double c = 0.0;
      for (const auto& [key, coeff] : loss.coeffs()) {
        if (key.first >= 2) c += std::abs(coeff) * key.first * (key.first - 1);
      }
      return std::max(1.0, c);
    }
  }
  return 1.0;
}

class Objective {
 public:
  Objective(const Design& d, const LossSpec& loss) : d_(d), loss_(loss) {
    if (loss.kind() == LossSpec::Kind::Squared && d.cols <= kGramColumnLimit) {
      use_gram_ = true;
      const std::size_t m = d.cols;
      gram_.assign(m * m, 0.0);
      cross_.assign(m, 0.0);
      for (std::size_t i = 0; i < d.rows; ++i) {
        const double* r = d.row(i);
        for (std::size_t a = 0; a < m; ++a) {
          cross_[a] += r[a] * d.y[i];
          for (std::size_t b = a; b < m; ++b) gram_[a * m + b] += r[a] * r[b];
        }
        y_sq_ += d.y[i] * d.y[i];
      }
      const double n = static_cast<double>(d.rows);
      for (std::size_t a = 0; a < m; ++a) {
        cross_[a] /= n;
        for (std::size_t b = a; b < m; ++b) {
          gram_[a * m + b] /= n;
          gram_[b * m + a] = gram_[a * m + b];
        }
      }
      y_sq_ /= n;
    }
  }

  double value(const std::vector<double>& theta) const {
    if (use_gram_) {
      const std::size_t m = d_.cols;
      double quad = 0.0, lin = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        double ga = 0.0;
        for (std::size_t b = 0; b < m; ++b) ga += gram_[a * m + b] * theta[b];
        quad += theta[a] * ga;
        lin += cross_[a] * theta[a];
      }
      return std::max(0.0, quad - 2.0 * lin + y_sq_);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < d_.rows; ++i) {
      total += eval_loss(loss_, dot(i, theta), d_.y[i]);
    }
    return total / static_cast<double>(d_.rows);
  }

  void gradient(const std::vector<double>& theta, std::vector<double>& grad) const {
    const std::size_t m = d_.cols;
    std::fill(grad.begin(), grad.end(), 0.0);
    if (use_gram_) {
      for (std::size_t a = 0; a < m; ++a) {
        double ga = 0.0;
        for (std::size_t b = 0; b < m; ++b) ga += gram_[a * m + b] * theta[b];
        grad[a] = 2.0 * (ga - cross_[a]);
      }
      return;
    }
    for (std::size_t i = 0; i < d_.rows; ++i) {
      const double slope = loss_derivative(loss_, dot(i, theta), d_.y[i]);
      if (slope == 0.0) continue;
      const double* r = d_.row(i);
      for (std::size_t j = 0; j < m; ++j) grad[j] += slope * r[j];
    }
    const double inv_n = 1.0 / static_cast<double>(d_.rows);
    for (double& g : grad) g *= inv_n;
  }

 private:
  double dot(std::size_t i, const std::vector<double>& theta) const {
    const double* r = d_.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < d_.cols; ++j) s += r[j] * theta[j];
    return s;
  }

  const Design& d_;
  const LossSpec& loss_;
  bool use_gram_ = false;
  std::vector<double> gram_;
  std::vector<double> cross_;
  double y_sq_ = 0.0;
};

struct DescentResult {
  std::vector<double> theta;  // caller's (unwhitened) coordinates
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

DescentResult run_descent(Design design, const LossSpec& loss,
                          const SolverConfig& config) {
  const bool constrained = config.l1_bound.has_value();
  std::optional<Preconditioner> pre;
  if (!constrained && design.cols > 1) pre = whiten(design);
  const double radius = constrained ? 2.0 * *config.l1_bound : 0.0;

  const Objective objective(design, loss);
  const double lambda = std::max(top_eigenvalue(design), 1e-12);
  const double base_step = config.step_scale / (curvature_factor(loss) * lambda);

  const std::size_t m = design.cols;
  std::vector<double> theta(m, 0.0), average(m, 0.0), grad(m, 0.0);

  DescentResult result;
  std::vector<double> best = average;
  double best_value = objective.value(best);
  if (config.record_trace) result.trace.push_back(best_value);
  double reference = best_value;
  std::size_t checks_without_progress = 0;

  std::size_t t = 0;
  while (t < config.max_iterations) {
    ++t;
    objective.gradient(theta, grad);
    const bool stationary =
        std::all_of(grad.begin(), grad.end(), [](double g) { return g == 0.0; });
    if (!stationary) {
      const double step = base_step / std::sqrt(static_cast<double>(t));
      for (std::size_t j = 0; j < m; ++j) theta[j] -= step * grad[j];
      if (constrained) project_l1_ball(theta, radius);
    }
    const double w = 1.0 / static_cast<double>(t);
    for (std::size_t j = 0; j < m; ++j) average[j] += w * (theta[j] - average[j]);

    if (stationary || t % config.check_interval == 0 || t == config.max_iterations) {
      const double avg_value = objective.value(average);
      const double cur_value = objective.value(theta);
      if (avg_value < best_value) {
        best_value = avg_value;
        best = average;
      }
      if (cur_value < best_value) {
        best_value = cur_value;
        best = theta;
      }
      if (config.record_trace) result.trace.push_back(best_value);
      if (stationary) {
        result.converged = true;
        break;
      }
      if (reference - best_value > config.tolerance * std::max(1.0, std::abs(best_value))) {
        reference = best_value;
        checks_without_progress = 0;
      } else if (++checks_without_progress >= config.stall_checks) {
        result.converged = true;
        break;
      }
    }
  }
  result.iterations = t;
  if (constrained) project_l1_ball(best, radius);
  result.theta = pre ? unwhiten(best, *pre) : best;
  return result;
}

TrainedModel finish(const Dataset& data, const LossSpec& loss, Separator sep,
                    DescentResult&& r) {
  TrainedModel model{std::move(sep)};
  model.final_empirical_risk = empirical_risk(data, model.separator, loss);
  model.iterations_used = r.iterations;
  model.converged = r.converged;
  model.best_effort = !loss.convex_in_g();
  model.objective_trace = std::move(r.trace);
  return model;
}

void check_training_input(const Dataset& data, const LossSpec& loss,
                          const SolverConfig& config) {
  config.validate();
  data.require_nonempty();
  if (loss.requires_binary_labels()) data.require_classification();
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations == 0) throw InvalidInput("max_iterations must be positive");
  if (!(step_scale > 0.0) || !std::isfinite(step_scale)) {
    throw InvalidInput("step_scale must be positive");
  }
  if (l1_bound && !(*l1_bound > 0.0)) throw InvalidInput("l1 bound M must be positive");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be positive");
  if (check_interval == 0 || stall_checks == 0) {
    throw InvalidInput("check interval and stall checks must be positive");
  }
}

void RefineConfig::validate() const {
  if (stages == 0 || steps_per_stage == 0) {
    throw InvalidInput("refinement needs at least one stage and one step");
  }
  if (!(initial_bandwidth > 0.0) || !(bandwidth_shrink > 0.0 && bandwidth_shrink < 1.0)) {
    throw InvalidInput("bandwidths must be positive with a shrink factor in (0, 1)");
  }
}

void project_l1_ball(std::vector<double>& v, double radius) {
  double norm = 0.0;
  for (double e : v) norm += std::abs(e);
  if (norm <= radius) return;
  std::vector<double> mags(v.size());
  std::transform(v.begin(), v.end(), mags.begin(),
                 [](double e) { return std::abs(e); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumulative = 0.0, threshold = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    cumulative += mags[i];
    const double candidate = (cumulative - radius) / static_cast<double>(i + 1);
    if (mags[i] > candidate) threshold = candidate;
  }
  for (double& e : v) {
    const double shrunk = std::max(0.0, std::abs(e) - threshold);
    e = std::copysign(shrunk, e);
  }
  // Guard against rounding leaving the point a hair outside the ball.
  double after = 0.0;
  for (double e : v) after += std::abs(e);
  if (after > radius) {
    const double f = radius / after;
    for (double& e : v) e *= f;
  }
}

TrainedModel train_linear(const Dataset& data, const LossSpec& loss,
                          const SolverConfig& config) {
  check_training_input(data, loss, config);
  DescentResult r = run_descent(affine_design(data), loss, config);
  AffineSeparator sep;
  sep.b = r.theta[0];
  sep.w.assign(r.theta.begin() + 1, r.theta.end());
  return finish(data, loss, std::move(sep), std::move(r));
}

TrainedModel train_polynomial(const Dataset& data, int k, const LossSpec& loss,
                              const SolverConfig& config) {
  if (k < 1) throw InvalidInput("polynomial degree must be at least 1");
  check_training_input(data, loss, config);
  const std::uint64_t lifted = monomial_count(data.dim(), k);
  if (lifted - 1 > config.dimension_cap) {
    throw DimensionCapExceeded(fmt::format(
        "lifted dimension {} exceeds the cap {}", lifted - 1, config.dimension_cap));
  }
  const MonomialBasis basis(data.dim(), k);
  DescentResult r = run_descent(lifted_design(data, basis), loss, config);
  PolynomialSeparator sep(data.dim(), k, r.theta);
  return finish(data, loss, std::move(sep), std::move(r));
}

Separator refine_misclassification(const Dataset& data, const Separator& start,
                                   const RefineConfig& config) {
  config.validate();
  data.require_nonempty();
  data.require_classification();
  if (input_dim(start) != data.dim()) throw InvalidInput("separator dimension mismatch");

  const auto* poly = std::get_if<PolynomialSeparator>(&start);
  Design design = poly ? lifted_design(data, poly->basis()) : affine_design(data);
  if (design.cols < 2) return start;
  const Preconditioner pre = whiten(design);
  const std::size_t n = design.rows;
  const std::size_t m = design.cols;
  const double nn = static_cast<double>(n);

  // Whitened columns are orthonormal under the empirical measure, so the
  // start's scores project onto them by a plain average.
  std::vector<double> u(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = eval_separator(start, data[i].x);
    const double* r = design.row(i);
    for (std::size_t j = 0; j < m; ++j) u[j] += s * r[j] / nn;
  }
  const double scale = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
  if (!(scale > 0.0)) return start;
  for (double& e : u) e /= scale;

  std::vector<double> margin(n);
  auto compute_margins = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* r = design.row(i);
      double g = 0.0;
      for (std::size_t j = 0; j < m; ++j) g += r[j] * v[j];
      margin[i] = design.y[i] * g;
    }
  };
  // Errors under the g >= 0 -> +1 convention.
  auto count_errors = [&](const std::vector<double>& v) {
    std::size_t errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* r = design.row(i);
      double g = 0.0;
      for (std::size_t j = 0; j < m; ++j) g += r[j] * v[j];
      errors += (design.y[i] > 0.0 ? g < 0.0 : g >= 0.0) ? 1 : 0;
    }
    return errors;
  };
  auto smoothed = [&](double h) {
    double total = 0.0;
    for (double r : margin) total += 0.5 * std::erfc(r / (h * std::numbers::sqrt2));
    return total / nn;
  };

  std::vector<double> best = u;
  std::size_t best_errors = confusion(data, start).errors();
  bool improved = false;

  compute_margins(u);
  double spread = 0.0;
  for (double r : margin) spread += r * r;
  double h = config.initial_bandwidth * std::sqrt(spread / nn);
  std::vector<double> grad(m), trial(m);
  for (std::size_t stage = 0; stage < config.stages; ++stage, h *= config.bandwidth_shrink) {
    compute_margins(u);
    double value = smoothed(h);
    double step = 0.1;
    for (std::size_t it = 0; it < config.steps_per_stage; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double* r = design.row(i);
        const double coef = -std::exp(-0.5 * (margin[i] / h) * (margin[i] / h)) *
                            design.y[i];
        for (std::size_t j = 0; j < m; ++j) grad[j] += coef * r[j];
      }
      // Tangent component only: the objective is invariant to the scale of u.
      const double radial = std::inner_product(grad.begin(), grad.end(), u.begin(), 0.0);
      for (std::size_t j = 0; j < m; ++j) grad[j] -= radial * u[j];
      const double gnorm = std::sqrt(std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0));
      if (!(gnorm > 0.0)) break;
      bool accepted = false;
      for (int tries = 0; tries < 30 && !accepted; ++tries) {
        for (std::size_t j = 0; j < m; ++j) trial[j] = u[j] - step * grad[j] / gnorm;
        const double tn = std::sqrt(std::inner_product(trial.begin(), trial.end(), trial.begin(), 0.0));
        for (double& e : trial) e /= tn;
        compute_margins(trial);
        const double candidate = smoothed(h);
        if (candidate < value) {
          accepted = true;
          value = candidate;
          u.swap(trial);
          step = std::min(1.0, step * 1.5);
        } else {
          step *= 0.5;
        }
      }
      if (!accepted) {
        compute_margins(u);
        break;
      }
      const std::size_t errors = count_errors(u);
      if (errors < best_errors) {
        best_errors = errors;
        best = u;
        improved = true;
      }
    }
  }
  if (!improved) return start;

  for (double& e : best) e *= scale;
  const std::vector<double> theta = unwhiten(best, pre);
  if (poly) return PolynomialSeparator(data.dim(), poly->degree(), theta);
  AffineSeparator sep;
  sep.b = theta[0];
  sep.w.assign(theta.begin() + 1, theta.end());
  return sep;
}

double cross_validated_risk(const Dataset& data, const LossSpec& loss,
                            const SolverConfig& config, std::size_t folds) {
  if (folds < 2) throw InvalidInput("cross-validation needs at least 2 folds");
  if (data.size() < folds) throw InvalidInput("fewer samples than folds");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  shuffle(order, rng);

  std::vector<double> fold_loss(folds, 0.0);
  parallel_for(folds, [&](std::size_t f) {
    const std::size_t begin = data.size() * f / folds;
    const std::size_t end = data.size() * (f + 1) / folds;
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i >= begin && i < end ? test_idx : train_idx).push_back(order[i]);
    }
    SolverConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, f);
    const Dataset train = data.subset(train_idx);
    const TrainedModel model = train_linear(train, loss, fold_config);
    double total = 0.0;
    for (std::size_t i : test_idx) {
      total += eval_loss(loss, eval_separator(model.separator, data[i].x), data[i].y);
    }
    fold_loss[f] = total;
  });
  double total = 0.0;
  for (double v : fold_loss) total += v;
  return total / static_cast<double>(data.size());
}

std::vector<std::size_t> select_features(const Dataset& data,
                                         std::size_t target_count,
                                         const LossSpec& loss,
                                         const SolverConfig& config,
                                         std::size_t folds) {
  if (target_count < 1 || target_count > data.dim()) {
    throw InvalidInput(fmt::format("cannot select {} of {} features",
                                   target_count, data.dim()));
  }
  if (folds < 2) throw InvalidInput("cross-validation needs at least 2 folds");
  std::vector<std::size_t> chosen;
  std::vector<bool> used(data.dim(), false);
  while (chosen.size() < target_count) {
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < data.dim(); ++j) {
      if (!used[j]) candidates.push_back(j);
    }
    std::vector<double> scores(candidates.size());
    // Every candidate sees the same fold split so the comparison is paired.
    parallel_for(candidates.size(), [&](std::size_t c) {
      std::vector<std::size_t> coords = chosen;
      coords.push_back(candidates[c]);
      scores[c] = cross_validated_risk(data.project(coords), loss, config, folds);
    });
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (scores[c] < scores[best]) best = c;
    }
    chosen.push_back(candidates[best]);
    used[candidates[best]] = true;
  }
  return chosen;
}

std::string summary_line(const TrainedModel& model) {
  return fmt::format("risk={} iters={} converged={}",
                     format_real(model.final_empirical_risk),
                     model.iterations_used, model.converged ? "true" : "false");
}

}  // namespace slt

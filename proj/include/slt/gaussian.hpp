#pragma once

// Two-class Gaussian laboratory: sampling, the Bayes-optimal quadratic
// surface, Monte Carlo and closed-form weighted risks, and algorithmic-error
// estimation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "slt/model.hpp"
#include "slt/random.hpp"
#include "slt/solver.hpp"

namespace slt {

inline constexpr std::size_t kMaxGaussianDim = 64;

double normal_cdf(double x);
double normal_pdf(double x);

// N(mean, cov) with cov symmetric (within 1e-12) and positive definite.
class GaussianClass {
 public:
  GaussianClass(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& cov() const noexcept { return cov_; }
  // Lower-triangular L with cov = L L^T.
  const Eigen::MatrixXd& cholesky_factor() const noexcept { return chol_; }
  const Eigen::MatrixXd& precision() const noexcept { return precision_; }
  double log_det() const noexcept { return log_det_; }

  double log_density(std::span<const double> x) const;
  // mean + L z with z standard normal from rng.
  void draw(Rng& rng, std::span<double> out) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  Eigen::MatrixXd precision_;
  double log_det_ = 0.0;
};

// Class +1 and class -1 with risk weights (beta1, beta2) and sampling priors
// (pi1, pi2). The priors default to the weights.
class GaussianPair {
 public:
  GaussianPair(GaussianClass positive, GaussianClass negative, double beta1 = 0.5);
  GaussianPair(GaussianClass positive, GaussianClass negative, double beta1,
               double pi1);

  std::size_t dim() const noexcept { return positive_.dim(); }
  const GaussianClass& positive() const noexcept { return positive_; }
  const GaussianClass& negative() const noexcept { return negative_; }
  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return 1.0 - beta1_; }
  double pi1() const noexcept { return pi1_; }
  double pi2() const noexcept { return 1.0 - pi1_; }

  // Same classes, priors replaced.
  GaussianPair with_priors(double pi1) const;

 private:
  GaussianClass positive_;
  GaussianClass negative_;
  double beta1_;
  double pi1_;
};

// q(x) = x^T A x + b.x + c, classifying +1 when q(x) <= 0.
struct QuadraticSurface {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(b.size()); }
  double eval(std::span<const double> x) const;
  int classify(std::span<const double> x) const { return eval(x) <= 0.0 ? 1 : -1; }
};

// "quad d=<d>", then d rows of A, one row of b, then c; 17 significant digits.
void write_quadratic(std::ostream& out, const QuadraticSurface& q);
QuadraticSurface read_quadratic(std::istream& in);

// Label +1 with probability pi1, then x from that class. Reproducible per seed.
Dataset sample_pair(const GaussianPair& pair, std::size_t n, std::uint64_t seed);

// The surface beta1 rho1(x) = beta2 rho2(x):
//   A = S1^-1 - S2^-1,  b = -2 (S1^-1 mu1 - S2^-1 mu2),
//   c = mu1' S1^-1 mu1 - mu2' S2^-1 mu2 + ln(beta2^2 det S1 / (beta1^2 det S2)).
// q(x) <= 0 exactly when beta1 rho1(x) >= beta2 rho2(x).
QuadraticSurface bayes_quadratic_surface(const GaussianPair& pair);

// ln(beta1 rho1(x)) - ln(beta2 rho2(x)), evaluated in log space.
double log_density_ratio(const GaussianPair& pair, std::span<const double> x);

using Classifier = std::function<int(std::span<const double>)>;
Classifier as_classifier(const Separator& sep);
Classifier as_classifier(const QuadraticSurface& q);

struct RiskEstimate {
  double estimate = 0.0;        // beta1 p1 + beta2 p2
  double standard_error = 0.0;  // binomial, propagated through the weights
  double p1 = 0.0;              // P(classified -1 | class +1)
  double p2 = 0.0;              // P(classified +1 | class -1)
};

// n_mc draws from each class (not from the mixture). Draws come in fixed
// blocks with seeds derived from (seed, class, block), so the result does not
// depend on the thread count.
RiskEstimate weighted_risk_mc(const GaussianPair& pair, const Classifier& clf,
                              std::size_t n_mc, std::uint64_t seed);

struct PairedRiskDifference {
  RiskEstimate first;
  RiskEstimate second;
  double difference = 0.0;      // first - second, on the same draws
  double standard_error = 0.0;  // of the paired difference
};

PairedRiskDifference paired_risk_difference_mc(const GaussianPair& pair,
                                               const Classifier& first,
                                               const Classifier& second,
                                               std::size_t n_mc,
                                               std::uint64_t seed);

// Mean and standard deviation of w.x + b under one class.
std::pair<double, double> affine_score_moments(const GaussianClass& cls,
                                               const AffineSeparator& sep);

// Closed-form weighted misclassification risk of an affine separator.
// Requires equal covariances (NotApplicable otherwise) and w != 0.
double gaussian_linear_risk_exact(const GaussianPair& pair, const AffineSeparator& sep);

// Closed-form expected hinge or squared loss of an affine separator under the
// prior mixture pi1 N1 + pi2 N2. Other losses: NotApplicable.
double gaussian_affine_loss_risk(const GaussianPair& pair, const AffineSeparator& sep,
                                 const LossSpec& loss);

enum class MatrixNorm { Frobenius, Spectral };

// ||S1^-1 - S2^-1|| in the chosen norm.
double sigma_criterion(const GaussianPair& pair, MatrixNorm norm = MatrixNorm::Frobenius);

struct AlgorithmicErrorEstimate {
  double value = 0.0;           // max(raw, 0)
  double raw = 0.0;             // R(model) - R(Bayes surface), paired MC
  double standard_error = 0.0;
  double model_risk = 0.0;
  double bayes_risk = 0.0;
  Separator model;              // the degree-k proxy for the best in class
  Separator surrogate_model;    // the surrogate-loss minimizer before refinement
  double surrogate_risk = 0.0;  // its empirical surrogate loss on the training draws
};

// e_alg(k) proxy: train a degree-k model on n_train draws whose priors are
// set to (beta1, beta2), so that the plain error rate on them targets the
// weighted risk; refine it on that error rate (the surrogate minimizer is not
// the best classifier in the class); then compare against the Bayes surface
// on shared Monte Carlo draws. For k = 1 the refinement also starts from the
// best single threshold along the discriminant direction and the eigenvectors
// of S1^-1 - S2^-1, and the start with fewer training errors wins.
AlgorithmicErrorEstimate algorithmic_error_estimate(
    const GaussianPair& pair, int k, std::size_t n_train, std::size_t n_mc,
    std::uint64_t seed, const LossSpec& loss = LossSpec::hinge(),
    const SolverConfig& config = {});

// A r^{K+1} / (K+1)!
double taylor_alg_error_bound(double A_deriv, double r, int K);

}  // namespace slt

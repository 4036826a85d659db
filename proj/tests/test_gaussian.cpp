#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "slt/error.hpp"
#include "slt/gaussian.hpp"
#include "slt/model.hpp"
#include "slt/random.hpp"

namespace {

using namespace slt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Log density from an LU inverse and determinant, independent of the
// library's Cholesky path.
double log_density_oracle(const VectorXd& mu, const MatrixXd& cov, const VectorXd& x) {
  const VectorXd r = x - mu;
  const double quad = r.dot(cov.fullPivLu().inverse() * r);
  return -0.5 * quad - 0.5 * std::log(cov.fullPivLu().determinant()) -
         0.5 * static_cast<double>(mu.size()) * std::log(2.0 * std::numbers::pi);
}

MatrixXd random_spd(std::size_t d, Rng& rng) {
  MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  MatrixXd s = m * m.transpose() + 0.3 * MatrixXd::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

VectorXd random_vec(std::size_t d, Rng& rng, double scale = 1.0) {
  VectorXd v(d);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = scale * rng.normal();
  return v;
}

GaussianPair random_pair(std::size_t d, Rng& rng, bool equal_cov = false) {
  const MatrixXd s1 = random_spd(d, rng);
  const MatrixXd s2 = equal_cov ? s1 : random_spd(d, rng);
  const double beta1 = 0.2 + 0.6 * rng.uniform();
  return GaussianPair(GaussianClass(random_vec(d, rng), s1),
                      GaussianClass(random_vec(d, rng), s2), beta1);
}

SolverConfig fast_solver() {
  SolverConfig c;
  c.max_iterations = 2000;
  c.tolerance = 1e-6;
  return c;
}

GaussianPair symmetric_1d() {
  return GaussianPair(GaussianClass(VectorXd::Constant(1, 1.0), MatrixXd::Identity(1, 1)),
                      GaussianClass(VectorXd::Constant(1, -1.0), MatrixXd::Identity(1, 1)));
}

TEST(GaussianClass, RejectsBadCovariance) {
  MatrixXd asym(2, 2);
  asym << 1.0, 0.5, 0.4, 1.0;
  EXPECT_THROW(GaussianClass(VectorXd::Zero(2), asym), InvalidDistribution);
  MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(GaussianClass(VectorXd::Zero(2), indefinite), InvalidDistribution);
  EXPECT_THROW(GaussianClass(VectorXd::Zero(3), MatrixXd::Identity(2, 2)), InvalidDistribution);
}

TEST(GaussianClass, LogDensityMatchesOracle) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + rng.below(4);
    const GaussianClass c(random_vec(d, rng), random_spd(d, rng));
    const VectorXd x = random_vec(d, rng, 2.0);
    EXPECT_NEAR(c.log_density({x.data(), d}), log_density_oracle(c.mean(), c.cov(), x), 1e-9);
  }
}

TEST(GaussianPair, WeightsAndPriors) {
  const auto a = GaussianClass(VectorXd::Zero(1), MatrixXd::Identity(1, 1));
  const GaussianPair p(a, a, 0.3);
  EXPECT_DOUBLE_EQ(p.pi1(), 0.3);
  EXPECT_DOUBLE_EQ(p.beta2(), 0.7);
  EXPECT_DOUBLE_EQ(p.with_priors(0.9).pi2(), 1.0 - 0.9);
  EXPECT_THROW(GaussianPair(a, a, 1.5), InvalidDistribution);
  const auto b = GaussianClass(VectorXd::Zero(2), MatrixXd::Identity(2, 2));
  EXPECT_THROW(GaussianPair(a, b), InvalidDistribution);
}

TEST(Sampling, MeanAndCovarianceConverge) {
  MatrixXd cov(3, 3);
  cov << 2.0, 0.3, 0.0, 0.3, 1.0, -0.2, 0.0, -0.2, 0.5;
  const VectorXd mu = (VectorXd(3) << 1.0, -2.0, 0.5).finished();
  const GaussianPair pair(GaussianClass(mu, cov), GaussianClass(-mu, cov), 0.5, 1.0);
  const Dataset data = sample_pair(pair, 100'000, 7);
  VectorXd mean = VectorXd::Zero(3);
  for (const auto& s : data) {
    EXPECT_EQ(s.y, 1.0);
    mean += Eigen::Map<const VectorXd>(s.x.data(), 3);
  }
  mean /= 100'000.0;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(mean(i), mu(i), 0.02);
  MatrixXd second = MatrixXd::Zero(3, 3);
  for (const auto& s : data) {
    const VectorXd r = Eigen::Map<const VectorXd>(s.x.data(), 3) - mean;
    second += r * r.transpose();
  }
  second /= 100'000.0;
  EXPECT_LT((second - cov).cwiseAbs().maxCoeff(), 0.04);
}

TEST(Sampling, PriorsAndDeterminism) {
  const GaussianPair pair = symmetric_1d().with_priors(0.25);
  const Dataset a = sample_pair(pair, 20'000, 3);
  const Dataset b = sample_pair(pair, 20'000, 3);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
    if (a[i].y > 0) ++pos;
  }
  EXPECT_NEAR(pos / 20'000.0, 0.25, 4.0 * std::sqrt(0.25 * 0.75 / 20'000));
  EXPECT_NE(sample_pair(pair, 10, 4)[0].x, a[0].x);
}

TEST(BayesSurface, EqualCovarianceIsAHyperplane) {
  const GaussianPair pair(GaussianClass((VectorXd(2) << 1, 0).finished(), MatrixXd::Identity(2, 2)),
                          GaussianClass((VectorXd(2) << -1, 0).finished(), MatrixXd::Identity(2, 2)));
  const QuadraticSurface q = bayes_quadratic_surface(pair);
  EXPECT_LE(q.A.norm(), 1e-10);
  EXPECT_NEAR(q.b(0), -4.0, 1e-12);
  EXPECT_NEAR(q.b(1), 0.0, 1e-12);
  EXPECT_NEAR(q.c, 0.0, 1e-12);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    MatrixXd cov = random_spd(3, rng);
    const GaussianPair p(GaussianClass(random_vec(3, rng), cov),
                         GaussianClass(random_vec(3, rng), cov), 0.4);
    EXPECT_LE(bayes_quadratic_surface(p).A.norm(), 1e-10);
  }
}

TEST(BayesSurface, UnequalWeightsOnlyShiftC) {
  Rng rng(3);
  const MatrixXd s = random_spd(2, rng);
  const GaussianClass a(random_vec(2, rng), s), b(random_vec(2, rng), s);
  const auto q1 = bayes_quadratic_surface(GaussianPair(a, b, 0.5));
  const auto q2 = bayes_quadratic_surface(GaussianPair(a, b, 0.8));
  EXPECT_LE((q1.A - q2.A).norm(), 1e-12);
  EXPECT_LE((q1.b - q2.b).norm(), 1e-12);
  EXPECT_NE(q1.c, q2.c);
}

TEST(BayesSurface, OneDimensionalBoundaryAtZero) {
  const QuadraticSurface q = bayes_quadratic_surface(symmetric_1d());
  const double plus[] = {0.5}, minus[] = {-0.5}, zero[] = {0.0};
  EXPECT_EQ(q.classify(plus), 1);
  EXPECT_EQ(q.classify(minus), -1);
  EXPECT_NEAR(q.eval(zero), 0.0, 1e-12);
  const VectorXd m1 = VectorXd::Constant(1, 1.0), m2 = -m1;
  const MatrixXd I = MatrixXd::Identity(1, 1);
  EXPECT_GT(log_density_oracle(m1, I, VectorXd::Constant(1, 0.5)),
            log_density_oracle(m2, I, VectorXd::Constant(1, 0.5)));
}

TEST(BayesSurface, SignAgreesWithDensityComparison) {
  Rng rng(4);
  for (int p = 0; p < 10; ++p) {
    const std::size_t d = 1 + rng.below(3);
    const GaussianPair pair = random_pair(d, rng);
    const QuadraticSurface q = bayes_quadratic_surface(pair);
    const auto& a = pair.positive();
    const auto& b = pair.negative();
    for (int i = 0; i < 1000; ++i) {
      const VectorXd x = random_vec(d, rng, 3.0);
      const double lhs = std::log(pair.beta1()) + log_density_oracle(a.mean(), a.cov(), x);
      const double rhs = std::log(pair.beta2()) + log_density_oracle(b.mean(), b.cov(), x);
      if (std::abs(lhs - rhs) < 1e-9) continue;  // numerically on the surface
      ASSERT_EQ(q.classify({x.data(), d}) == 1, lhs >= rhs);
    }
  }
}

TEST(BayesSurface, PrintedHalfLogConstantDisagreesWithDensities) {
  // The constant with 1/2 ln(beta2^2 det S1 / (beta1^2 det S2)) is not the
  // surface beta1 rho1 = beta2 rho2: at the point where the two weighted
  // densities agree it is off by 1/2 ln(...) whenever that log is non-zero.
  Rng rng(5);
  std::size_t disagreements = 0;
  for (int p = 0; p < 10; ++p) {
    const GaussianPair pair = random_pair(2, rng);
    const QuadraticSurface q = bayes_quadratic_surface(pair);
    QuadraticSurface half = q;
    const double log_term = 2.0 * std::log(pair.beta2()) - 2.0 * std::log(pair.beta1()) +
                            pair.positive().log_det() - pair.negative().log_det();
    half.c = q.c - 0.5 * log_term;
    for (int i = 0; i < 1000; ++i) {
      const VectorXd x = random_vec(2, rng, 3.0);
      const bool bayes = log_density_ratio(pair, {x.data(), 2}) >= 0.0;
      EXPECT_EQ(q.classify({x.data(), 2}) == 1, bayes);
      if ((half.classify({x.data(), 2}) == 1) != bayes) ++disagreements;
    }
  }
  EXPECT_GT(disagreements, 0u);
}

TEST(BayesSurface, SerializationRoundTrip) {
  Rng rng(6);
  const QuadraticSurface q = bayes_quadratic_surface(random_pair(3, rng));
  std::stringstream ss;
  write_quadratic(ss, q);
  EXPECT_EQ(ss.str().rfind("quad d=3\n", 0), 0u);
  const QuadraticSurface back = read_quadratic(ss);
  EXPECT_EQ(back.A, q.A);
  EXPECT_EQ(back.b, q.b);
  EXPECT_EQ(back.c, q.c);
  std::stringstream bad("quad d=2\n1 2\n3 4\n0 0\n0\n");
  EXPECT_THROW(read_quadratic(bad), ParseError);
}

TEST(RiskMC, SymmetricCaseMatchesNormalCdf) {
  const GaussianPair pair = symmetric_1d();
  const RiskEstimate r = weighted_risk_mc(pair, as_classifier(bayes_quadratic_surface(pair)),
                                          100'000, 11);
  const double phi = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(phi, 0.158655, 1e-6);
  EXPECT_NEAR(r.estimate, phi, 3.0 * r.standard_error);
  EXPECT_NEAR(normal_cdf(-1.0), phi, 1e-15);
}

TEST(RiskMC, PerfectSeparatorOnDistantClasses) {
  const double s = 0.01;
  const GaussianPair pair(
      GaussianClass(VectorXd::Constant(2, 10.0), s * MatrixXd::Identity(2, 2)),
      GaussianClass(VectorXd::Constant(2, -10.0), s * MatrixXd::Identity(2, 2)));
  const RiskEstimate r =
      weighted_risk_mc(pair, as_classifier(Separator{AffineSeparator{{1.0, 1.0}, 0.0}}), 10'000, 1);
  EXPECT_LT(r.estimate, 1e-4);
}

TEST(RiskMC, DeterministicAndRejectsTinySamples) {
  const GaussianPair pair = symmetric_1d();
  const auto clf = as_classifier(Separator{AffineSeparator{{1.0}, 0.2}});
  EXPECT_EQ(weighted_risk_mc(pair, clf, 20'000, 5).estimate,
            weighted_risk_mc(pair, clf, 20'000, 5).estimate);
  EXPECT_THROW(weighted_risk_mc(pair, clf, 50, 5), InvalidInput);
}

TEST(RiskExact, ClosedFormValuesAndLimits) {
  const GaussianPair pair = symmetric_1d();
  EXPECT_NEAR(gaussian_linear_risk_exact(pair, {{1.0}, 0.0}), 0.158655253931457, 1e-12);
  const GaussianPair skew(pair.positive(), pair.negative(), 0.3);
  EXPECT_NEAR(gaussian_linear_risk_exact(skew, {{1.0}, 1e6}), 0.7, 1e-12);
  EXPECT_NEAR(gaussian_linear_risk_exact(skew, {{1.0}, -1e6}), 0.3, 1e-12);
  EXPECT_THROW(gaussian_linear_risk_exact(pair, {{0.0}, 1.0}), InvalidInput);
  const GaussianPair unequal(pair.positive(),
                             GaussianClass(VectorXd::Zero(1), 2.0 * MatrixXd::Identity(1, 1)));
  EXPECT_THROW(gaussian_linear_risk_exact(unequal, {{1.0}, 0.0}), NotApplicable);
}

TEST(RiskExact, AgreesWithMonteCarloOnRandomConfigurations) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + rng.below(3);
    const GaussianPair pair = random_pair(d, rng, true);
    AffineSeparator g;
    g.w.resize(d);
    for (auto& w : g.w) w = rng.normal();
    g.b = rng.normal();
    const double exact = gaussian_linear_risk_exact(pair, g);
    const RiskEstimate mc = weighted_risk_mc(pair, as_classifier(Separator{g}), 50'000, 100 + t);
    EXPECT_NEAR(mc.estimate, exact, 3.0 * mc.standard_error + 1e-12) << t;
  }
}

TEST(RiskMC, UnbiasedOverSeeds) {
  Rng rng(9);
  const GaussianPair pair = random_pair(2, rng, true);
  const AffineSeparator g{{0.7, -0.4}, 0.1};
  const double exact = gaussian_linear_risk_exact(pair, g);
  double sum = 0.0, var = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RiskEstimate r = weighted_risk_mc(pair, as_classifier(Separator{g}), 5'000, s);
    sum += r.estimate;
    var += r.standard_error * r.standard_error;
  }
  const double pooled_se = std::sqrt(var) / 100.0;
  EXPECT_NEAR(sum / 100.0, exact, 3.0 * pooled_se);
}

TEST(RiskMC, PairedDifferenceIsExactlyTheDifference) {
  const GaussianPair pair = symmetric_1d();
  const auto a = as_classifier(Separator{AffineSeparator{{1.0}, 0.3}});
  const auto b = as_classifier(Separator{AffineSeparator{{1.0}, 0.0}});
  const auto d = paired_risk_difference_mc(pair, a, b, 50'000, 3);
  EXPECT_DOUBLE_EQ(d.difference, d.first.estimate - d.second.estimate);
  EXPECT_EQ(d.first.estimate, weighted_risk_mc(pair, a, 50'000, 3).estimate);
  // Pairing removes the shared noise: tighter than two independent runs.
  EXPECT_LT(d.standard_error, std::hypot(d.first.standard_error, d.second.standard_error));
  const double exact = gaussian_linear_risk_exact(pair, {{1.0}, 0.3}) -
                       gaussian_linear_risk_exact(pair, {{1.0}, 0.0});
  EXPECT_NEAR(d.difference, exact, 4.0 * d.standard_error);
}

TEST(AffineLossRisk, MatchesSampleAverages) {
  Rng rng(10);
  const GaussianPair pair = random_pair(2, rng).with_priors(0.35);
  const AffineSeparator g{{0.8, -0.5}, 0.2};
  const Dataset data = sample_pair(pair, 400'000, 12);
  for (const auto& loss : {LossSpec::hinge(), LossSpec::squared()}) {
    double sum = 0.0, sq = 0.0;
    for (const auto& s : data) {
      const double v = eval_loss(loss, eval_separator(g, s.x), s.y);
      sum += v;
      sq += v * v;
    }
    const double n = static_cast<double>(data.size());
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    EXPECT_NEAR(gaussian_affine_loss_risk(pair, g, loss), mean, 4.0 * se);
  }
  EXPECT_THROW(gaussian_affine_loss_risk(pair, g, LossSpec::polynomial({{{1, 0}, 1.0}})),
               NotApplicable);
}

TEST(Criterion, NormsAndInvariance) {
  const GaussianClass a(VectorXd::Zero(2), MatrixXd::Identity(2, 2));
  const GaussianClass b(VectorXd::Zero(2), 2.0 * MatrixXd::Identity(2, 2));
  EXPECT_EQ(sigma_criterion(GaussianPair(a, a)), 0.0);
  EXPECT_NEAR(sigma_criterion(GaussianPair(a, b)), 0.5 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(sigma_criterion(GaussianPair(a, b), MatrixNorm::Spectral), 0.5, 1e-12);

  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const MatrixXd s1 = random_spd(3, rng), s2 = random_spd(3, rng);
    const MatrixXd Q = MatrixXd(random_spd(3, rng).householderQr().householderQ());
    const MatrixXd r1 = Q * s1 * Q.transpose(), r2 = Q * s2 * Q.transpose();
    const double before = sigma_criterion(
        GaussianPair(GaussianClass(VectorXd::Zero(3), s1), GaussianClass(VectorXd::Zero(3), s2)));
    const double after = sigma_criterion(GaussianPair(
        GaussianClass(VectorXd::Zero(3), 0.5 * (r1 + r1.transpose())),
        GaussianClass(VectorXd::Zero(3), 0.5 * (r2 + r2.transpose()))));
    EXPECT_NEAR(before, after, 1e-9 * (1.0 + before));
  }
}

TEST(Taylor, Values) {
  EXPECT_NEAR(taylor_alg_error_bound(1.0, 1.0, 3), 1.0 / 24.0, 1e-15);
  const double r = 0.7;
  EXPECT_NEAR(taylor_alg_error_bound(2.0, r, 4) / taylor_alg_error_bound(2.0, r, 3), r / 5.0,
              1e-14);
  EXPECT_EQ(taylor_alg_error_bound(3.0, 0.0, 0), 0.0);
  EXPECT_THROW(taylor_alg_error_bound(-1.0, 1.0, 1), InvalidInput);
}

TEST(AlgorithmicError, AffineIsOptimalForEqualCovariances) {
  MatrixXd s(2, 2);
  s << 1.0, 0.3, 0.3, 0.8;
  const GaussianPair pair(GaussianClass((VectorXd(2) << 1, 0).finished(), s),
                          GaussianClass((VectorXd(2) << -1, 0.5).finished(), s));
  const auto e = algorithmic_error_estimate(pair, 1, 100'000, 100'000, 1,
                                        LossSpec::hinge(), fast_solver());
  EXPECT_NEAR(e.raw, 0.0, 3.0 * e.standard_error);
  EXPECT_EQ(e.value, std::max(e.raw, 0.0));
}

TEST(AlgorithmicError, AffineFailsOnConcentricClasses) {
  // Sigma1 = I, Sigma2 = 4I, equal means. The best affine rule is a 1-D
  // threshold on some projection; brute force over thresholds of a fixed
  // direction (all directions are equivalent by symmetry).
  const GaussianPair pair(GaussianClass(VectorXd::Zero(2), MatrixXd::Identity(2, 2)),
                          GaussianClass(VectorXd::Zero(2), 4.0 * MatrixXd::Identity(2, 2)));
  double best_affine = 1.0;
  for (double t = -6.0; t <= 6.0; t += 0.01) {
    // classify +1 when x1 <= t, or when x1 >= t
    const double le = 0.5 * (1.0 - normal_cdf(t)) + 0.5 * normal_cdf(t / 2.0);
    best_affine = std::min({best_affine, le, 1.0 - le});
  }
  const auto e = algorithmic_error_estimate(pair, 1, 100'000, 100'000, 2,
                                        LossSpec::hinge(), fast_solver());
  EXPECT_GT(e.raw, 5.0 * e.standard_error);
  EXPECT_NEAR(e.model_risk, best_affine, 0.01);
  EXPECT_GT(best_affine - e.bayes_risk, 0.1);
}

TEST(AlgorithmicError, QuadraticReachesBayes) {
  const GaussianPair pair(GaussianClass(VectorXd::Zero(2), MatrixXd::Identity(2, 2)),
                          GaussianClass(VectorXd::Zero(2), 4.0 * MatrixXd::Identity(2, 2)));
  const auto e = algorithmic_error_estimate(pair, 2, 100'000, 100'000, 3,
                                        LossSpec::hinge(), fast_solver());
  EXPECT_NEAR(e.raw, 0.0, 3.0 * e.standard_error);
  EXPECT_TRUE(std::holds_alternative<PolynomialSeparator>(e.model));
}

}  // namespace

#include "slt/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "slt/error.hpp"
#include "slt/parallel.hpp"
#include "slt/serialize.hpp"

namespace slt {

namespace {

constexpr std::size_t kBlockSize = 8192;

void check_probability(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw InvalidDistribution(fmt::format("{} must lie in [0, 1], got {}", what, v));
  }
}

Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

// Per-class sums over one block of draws: errors of each classifier and, for
// paired runs, the count of draws where exactly one of them errs.
struct BlockTally {
  std::size_t errors_first = 0;
  std::size_t errors_second = 0;
  double diff_sum = 0.0;
  double diff_sq_sum = 0.0;
};

// Runs n draws per class in fixed blocks. label is the class's true label;
// a draw counts as an error when the classifier returns the other label.
template <typename Visit>
std::vector<std::vector<BlockTally>> run_blocks(const GaussianPair& pair,
                                                std::size_t n,
                                                std::uint64_t seed, Visit visit) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::vector<BlockTally>> tallies(2, std::vector<BlockTally>(blocks));
  parallel_for(2 * blocks, [&](std::size_t job) {
    const std::size_t cls = job / blocks;
    const std::size_t block = job % blocks;
    const GaussianClass& g = cls == 0 ? pair.positive() : pair.negative();
    const int label = cls == 0 ? 1 : -1;
    Rng rng(derive_seed(seed, cls, block));
    std::vector<double> x(g.dim());
    const std::size_t begin = block * kBlockSize;
    const std::size_t end = std::min(n, begin + kBlockSize);
    BlockTally& t = tallies[cls][block];
    for (std::size_t i = begin; i < end; ++i) {
      g.draw(rng, x);
      visit(std::span<const double>(x), label, t);
    }
  });
  return tallies;
}

RiskEstimate combine(const GaussianPair& pair, std::size_t n,
                     std::size_t errors_pos, std::size_t errors_neg) {
  const double nn = static_cast<double>(n);
  RiskEstimate r;
  r.p1 = static_cast<double>(errors_pos) / nn;
  r.p2 = static_cast<double>(errors_neg) / nn;
  r.estimate = pair.beta1() * r.p1 + pair.beta2() * r.p2;
  const double v1 = r.p1 * (1.0 - r.p1) / nn;
  const double v2 = r.p2 * (1.0 - r.p2) / nn;
  r.standard_error = std::sqrt(pair.beta1() * pair.beta1() * v1 +
                               pair.beta2() * pair.beta2() * v2);
  return r;
}

void require_mc_size(std::size_t n_mc) {
  if (n_mc < 100) throw InvalidInput("Monte Carlo size must be at least 100");
}

// Fewest training errors over thresholds of the projection x.v, in either
// orientation. Exact on the sample: every cut between sorted scores is tried.
AffineSeparator best_threshold(const Dataset& data, const Eigen::VectorXd& v) {
  const std::size_t n = data.size();
  std::vector<std::pair<double, bool>> scored(n);
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    scored[i] = {as_eigen(data[i].x).dot(v), data[i].y > 0};
    if (data[i].y < 0) ++negatives;
  }
  std::sort(scored.begin(), scored.end());
  // errors of "+1 iff score >= cut" with the first j scores below the cut;
  // the reversed orientation makes n minus that many errors.
  std::size_t errors = negatives;
  std::size_t best_errors = std::min(errors, n - errors);
  std::size_t best_cut = 0;
  bool best_upper = errors <= n - errors;
  for (std::size_t j = 1; j <= n; ++j) {
    errors += scored[j - 1].second ? 1 : 0;
    errors -= scored[j - 1].second ? 0 : 1;
    if (j < n && scored[j].first == scored[j - 1].first) continue;
    const std::size_t low = std::min(errors, n - errors);
    if (low < best_errors) {
      best_errors = low;
      best_cut = j;
      best_upper = errors <= n - errors;
    }
  }
  double t;
  if (best_cut == 0) {
    t = scored.front().first - 1.0;
  } else if (best_cut == n) {
    t = scored.back().first + 1.0;
  } else {
    t = 0.5 * (scored[best_cut - 1].first + scored[best_cut].first);
  }
  const double sign = best_upper ? 1.0 : -1.0;
  AffineSeparator sep;
  sep.w.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) sep.w[static_cast<std::size_t>(i)] = sign * v(i);
  sep.b = -sign * t;
  return sep;
}

// Directions along which a single threshold is most informative for the
// pair: the discriminant direction and the eigenvectors of S1^-1 - S2^-1.
std::vector<Eigen::VectorXd> threshold_directions(const GaussianPair& pair) {
  std::vector<Eigen::VectorXd> out;
  const Eigen::VectorXd lda = (pair.positive().cov() + pair.negative().cov())
                                  .ldlt()
                                  .solve(pair.positive().mean() - pair.negative().mean());
  if (lda.norm() > 1e-12) out.push_back(lda / lda.norm());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pair.positive().precision() -
                                                           pair.negative().precision());
  for (Eigen::Index i = 0; i < eig.eigenvectors().cols(); ++i) {
    out.push_back(eig.eigenvectors().col(i));
  }
  return out;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

GaussianClass::GaussianClass(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto d = mean_.size();
  if (d < 1 || static_cast<std::size_t>(d) > kMaxGaussianDim) {
    throw InvalidDistribution(
        fmt::format("dimension must lie in [1, {}], got {}", kMaxGaussianDim, d));
  }
  if (cov_.rows() != d || cov_.cols() != d) {
    throw InvalidDistribution("covariance shape does not match the mean");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw InvalidDistribution("mean and covariance must be finite");
  }
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidDistribution("covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) {
    throw InvalidDistribution("covariance is not positive definite");
  }
  chol_ = llt.matrixL();
  if ((chol_.diagonal().array() <= 0.0).any()) {
    throw InvalidDistribution("covariance is not positive definite");
  }
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  precision_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  precision_ = 0.5 * (precision_ + precision_.transpose()).eval();
}

double GaussianClass::log_density(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidInput("point dimension mismatch");
  const Eigen::VectorXd diff = as_eigen(x) - mean_;
  const Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(diff);
  const double d = static_cast<double>(dim());
  return -0.5 * z.squaredNorm() - 0.5 * log_det_ -
         0.5 * d * std::log(2.0 * std::numbers::pi);
}

void GaussianClass::draw(Rng& rng, std::span<double> out) const {
  const std::size_t d = dim();
  double z[kMaxGaussianDim];
  for (std::size_t j = 0; j < d; ++j) z[j] = rng.normal();
  for (std::size_t r = 0; r < d; ++r) {
    double v = mean_(static_cast<Eigen::Index>(r));
    for (std::size_t j = 0; j <= r; ++j) {
      v += chol_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) * z[j];
    }
    out[r] = v;
  }
}

GaussianPair::GaussianPair(GaussianClass positive, GaussianClass negative,
                           double beta1)
    : GaussianPair(std::move(positive), std::move(negative), beta1, beta1) {}

GaussianPair::GaussianPair(GaussianClass positive, GaussianClass negative,
                           double beta1, double pi1)
    : positive_(std::move(positive)),
      negative_(std::move(negative)),
      beta1_(beta1),
      pi1_(pi1) {
  if (positive_.dim() != negative_.dim()) {
    throw InvalidDistribution("class dimensions differ");
  }
  check_probability(beta1_, "beta1");
  check_probability(pi1_, "pi1");
}

GaussianPair GaussianPair::with_priors(double pi1) const {
  return GaussianPair(positive_, negative_, beta1_, pi1);
}

double QuadraticSurface::eval(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidInput("point dimension mismatch");
  const auto d = static_cast<Eigen::Index>(x.size());
  double q = c;
  for (Eigen::Index r = 0; r < d; ++r) {
    const double xr = x[static_cast<std::size_t>(r)];
    double row = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) row += A(r, j) * x[static_cast<std::size_t>(j)];
    q += xr * (row + b(r));
  }
  return q;
}

void write_quadratic(std::ostream& out, const QuadraticSurface& q) {
  const auto d = static_cast<Eigen::Index>(q.dim());
  out << "quad d=" << d << '\n';
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out << (j ? " " : "") << format_real(q.A(r, j));
    }
    out << '\n';
  }
  for (Eigen::Index j = 0; j < d; ++j) out << (j ? " " : "") << format_real(q.b(j));
  out << '\n' << format_real(q.c) << '\n';
}

QuadraticSurface read_quadratic(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("missing quad header", line_no);
  std::size_t d = 0;
  {
    std::istringstream header(line);
    std::string tag;
    std::string dim;
    header >> tag >> dim;
    if (tag != "quad" || dim.rfind("d=", 0) != 0) {
      throw ParseError("expected 'quad d=<d>'", line_no);
    }
    try {
      d = std::stoul(dim.substr(2));
    } catch (const std::exception&) {
      throw ParseError("bad dimension in header", line_no);
    }
    if (d < 1 || d > kMaxGaussianDim) throw ParseError("dimension out of range", line_no);
  }
  auto read_row = [&](std::size_t count) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError("unexpected end of input", line_no);
    std::istringstream row(line);
    std::vector<double> values;
    std::string token;
    while (row >> token) {
      try {
        values.push_back(parse_real(token));
      } catch (const std::exception&) {
        throw ParseError("bad number '" + token + "'", line_no);
      }
    }
    if (values.size() != count) {
      throw ParseError(fmt::format("expected {} values, got {}", count, values.size()),
                       line_no);
    }
    return values;
  };
  const auto dd = static_cast<Eigen::Index>(d);
  QuadraticSurface q;
  q.A.resize(dd, dd);
  for (Eigen::Index r = 0; r < dd; ++r) {
    const auto row = read_row(d);
    for (Eigen::Index j = 0; j < dd; ++j) q.A(r, j) = row[static_cast<std::size_t>(j)];
  }
  const auto brow = read_row(d);
  q.b = Eigen::Map<const Eigen::VectorXd>(brow.data(), dd);
  q.c = read_row(1)[0];
  if ((q.A - q.A.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ParseError("matrix A is not symmetric", 2);
  }
  return q;
}

Dataset sample_pair(const GaussianPair& pair, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample size must be at least 1");
  Rng rng(seed);
  std::vector<LabeledSample> samples(n);
  for (auto& s : samples) {
    const bool positive = rng.uniform() < pair.pi1();
    s.y = positive ? 1.0 : -1.0;
    s.x.resize(pair.dim());
    (positive ? pair.positive() : pair.negative()).draw(rng, s.x);
  }
  return Dataset(pair.dim(), std::move(samples));
}

QuadraticSurface bayes_quadratic_surface(const GaussianPair& pair) {
  const auto& p1 = pair.positive();
  const auto& p2 = pair.negative();
  if (pair.beta1() <= 0.0 || pair.beta2() <= 0.0) {
    throw InvalidDistribution("both risk weights must be positive for a finite surface");
  }
  QuadraticSurface q;
  q.A = p1.precision() - p2.precision();
  const Eigen::VectorXd s1 = p1.precision() * p1.mean();
  const Eigen::VectorXd s2 = p2.precision() * p2.mean();
  q.b = -2.0 * (s1 - s2);
  q.c = p1.mean().dot(s1) - p2.mean().dot(s2) +
        2.0 * std::log(pair.beta2()) - 2.0 * std::log(pair.beta1()) +
        p1.log_det() - p2.log_det();
  return q;
}

double log_density_ratio(const GaussianPair& pair, std::span<const double> x) {
  return std::log(pair.beta1()) + pair.positive().log_density(x) -
         std::log(pair.beta2()) - pair.negative().log_density(x);
}

Classifier as_classifier(const Separator& sep) {
  return [sep](std::span<const double> x) { return classify(sep, x); };
}

Classifier as_classifier(const QuadraticSurface& q) {
  return [q](std::span<const double> x) { return q.classify(x); };
}

RiskEstimate weighted_risk_mc(const GaussianPair& pair, const Classifier& clf,
                              std::size_t n_mc, std::uint64_t seed) {
  require_mc_size(n_mc);
  const auto tallies = run_blocks(
      pair, n_mc, seed, [&](std::span<const double> x, int label, BlockTally& t) {
        if (clf(x) != label) ++t.errors_first;
      });
  std::size_t errors[2] = {0, 0};
  for (std::size_t cls = 0; cls < 2; ++cls) {
    for (const auto& t : tallies[cls]) errors[cls] += t.errors_first;
  }
  return combine(pair, n_mc, errors[0], errors[1]);
}

PairedRiskDifference paired_risk_difference_mc(const GaussianPair& pair,
                                               const Classifier& first,
                                               const Classifier& second,
                                               std::size_t n_mc,
                                               std::uint64_t seed) {
  require_mc_size(n_mc);
  const auto tallies = run_blocks(
      pair, n_mc, seed, [&](std::span<const double> x, int label, BlockTally& t) {
        const int e1 = first(x) != label ? 1 : 0;
        const int e2 = second(x) != label ? 1 : 0;
        t.errors_first += static_cast<std::size_t>(e1);
        t.errors_second += static_cast<std::size_t>(e2);
        const double diff = e1 - e2;
        t.diff_sum += diff;
        t.diff_sq_sum += diff * diff;
      });
  std::size_t e1[2] = {0, 0};
  std::size_t e2[2] = {0, 0};
  double var[2] = {0.0, 0.0};
  const double nn = static_cast<double>(n_mc);
  for (std::size_t cls = 0; cls < 2; ++cls) {
    double s = 0.0;
    double s2 = 0.0;
    for (const auto& t : tallies[cls]) {
      e1[cls] += t.errors_first;
      e2[cls] += t.errors_second;
      s += t.diff_sum;
      s2 += t.diff_sq_sum;
    }
    const double mean = s / nn;
    var[cls] = std::max(0.0, s2 / nn - mean * mean) / nn;
  }
  PairedRiskDifference out;
  out.first = combine(pair, n_mc, e1[0], e1[1]);
  out.second = combine(pair, n_mc, e2[0], e2[1]);
  out.difference = out.first.estimate - out.second.estimate;
  out.standard_error = std::sqrt(pair.beta1() * pair.beta1() * var[0] +
                                 pair.beta2() * pair.beta2() * var[1]);
  return out;
}

std::pair<double, double> affine_score_moments(const GaussianClass& cls,
                                               const AffineSeparator& sep) {
  if (sep.w.size() != cls.dim()) throw InvalidInput("separator dimension mismatch");
  const auto w = as_eigen(sep.w);
  const double mean = w.dot(cls.mean()) + sep.b;
  const double var = w.dot(cls.cov() * w);
  return {mean, std::sqrt(std::max(0.0, var))};
}

double gaussian_linear_risk_exact(const GaussianPair& pair, const AffineSeparator& sep) {
  if ((pair.positive().cov() - pair.negative().cov()).cwiseAbs().maxCoeff() > 1e-10) {
    throw NotApplicable("closed-form linear risk needs equal class covariances");
  }
  if (std::all_of(sep.w.begin(), sep.w.end(), [](double v) { return v == 0.0; })) {
    throw InvalidInput("closed-form linear risk needs a nonzero normal vector");
  }
  const auto [m1, s1] = affine_score_moments(pair.positive(), sep);
  const auto [m2, s2] = affine_score_moments(pair.negative(), sep);
  // P1(g < 0) and P2(g > 0).
  return pair.beta1() * normal_cdf(-m1 / s1) + pair.beta2() * normal_cdf(m2 / s2);
}

double gaussian_affine_loss_risk(const GaussianPair& pair, const AffineSeparator& sep,
                                 const LossSpec& loss) {
  const auto [m1, s1] = affine_score_moments(pair.positive(), sep);
  const auto [m2, s2] = affine_score_moments(pair.negative(), sep);
  switch (loss.kind()) {
    case LossSpec::Kind::Hinge: {
      // E[(1 - y g)_+] with 1 - y g ~ N(mu, s^2).
      auto positive_part = [](double mu, double s) {
        if (s == 0.0) return std::max(mu, 0.0);
        return mu * normal_cdf(mu / s) + s * normal_pdf(mu / s);
      };
      return pair.pi1() * positive_part(1.0 - m1, s1) +
             pair.pi2() * positive_part(1.0 + m2, s2);
    }
    case LossSpec::Kind::Squared:
      return pair.pi1() * ((m1 - 1.0) * (m1 - 1.0) + s1 * s1) +
             pair.pi2() * ((m2 + 1.0) * (m2 + 1.0) + s2 * s2);
    default:
      throw NotApplicable("closed-form loss risk covers hinge and squared loss only");
  }
}

double sigma_criterion(const GaussianPair& pair, MatrixNorm norm) {
  const Eigen::MatrixXd diff = pair.positive().precision() - pair.negative().precision();
  if (norm == MatrixNorm::Frobenius) return diff.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

AlgorithmicErrorEstimate algorithmic_error_estimate(
    const GaussianPair& pair, int k, std::size_t n_train, std::size_t n_mc,
    std::uint64_t seed, const LossSpec& loss, const SolverConfig& config) {
  if (k < 1) throw InvalidInput("degree must be at least 1");
  require_mc_size(n_mc);
  const Dataset train = sample_pair(pair.with_priors(pair.beta1()), n_train,
                                    derive_seed(seed, 0));
  const TrainedModel model = k == 1 ? train_linear(train, loss, config)
                                    : train_polynomial(train, k, loss, config);
  Separator best = refine_misclassification(train, model.separator);
  if (k == 1) {
    // The surrogate minimizer can sit at a symmetric point (concentric
    // classes give w = 0) from which local search cannot leave, so affine
    // classes also start from the best threshold along fixed directions.
    std::size_t best_errors = confusion(train, best).errors();
    std::optional<AffineSeparator> start;
    std::size_t start_errors = best_errors;
    for (const auto& v : threshold_directions(pair)) {
      AffineSeparator cand = best_threshold(train, v);
      const std::size_t e = confusion(train, cand).errors();
      if (e < start_errors) {
        start_errors = e;
        start = std::move(cand);
      }
    }
    if (start) {
      Separator refined = refine_misclassification(train, *start);
      const std::size_t e = confusion(train, refined).errors();
      if (e < best_errors) best = std::move(refined);
    }
  }
  const auto diff = paired_risk_difference_mc(
      pair, as_classifier(best),
      as_classifier(bayes_quadratic_surface(pair)), n_mc, derive_seed(seed, 1));
  AlgorithmicErrorEstimate out{.value = std::max(diff.difference, 0.0),
                               .raw = diff.difference,
                               .standard_error = diff.standard_error,
                               .model_risk = diff.first.estimate,
                               .bayes_risk = diff.second.estimate,
                               .model = std::move(best),
                               .surrogate_model = model.separator,
                               .surrogate_risk = model.final_empirical_risk};
  return out;
}

double taylor_alg_error_bound(double A_deriv, double r, int K) {
  if (!std::isfinite(A_deriv) || A_deriv < 0.0) throw InvalidInput("A must be >= 0");
  if (!std::isfinite(r) || r < 0.0) throw InvalidInput("r must be >= 0");
  if (K < 0) throw InvalidInput("K must be >= 0");
  // r^{K+1} / (K+1)! accumulated term by term to avoid overflow.
  double term = A_deriv;
  for (int i = 1; i <= K + 1; ++i) term *= r / i;
  return term;
}

}  // namespace slt

#pragma once

// Core vocabulary: labeled samples, losses, affine and polynomial separators,
// monomial lifting and empirical risk.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace slt {

using Vector = std::vector<double>;

struct LabeledSample {
  Vector x;
  double y = 0.0;
};

class Dataset {
 public:
  explicit Dataset(std::size_t dim);
  Dataset(std::size_t dim, std::vector<LabeledSample> samples);

  void add(LabeledSample sample);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  // True when every label is exactly -1 or +1.
  bool is_classification() const noexcept;
  void require_classification() const;
  void require_nonempty() const;

  Dataset subset(std::span<const std::size_t> indices) const;
  // Coordinate projection: keeps the listed feature indices, in that order.
  Dataset project(std::span<const std::size_t> coordinates) const;

 private:
  void validate(const LabeledSample& sample) const;

  std::size_t dim_;
  std::vector<LabeledSample> samples_;
};

// Polynomial coefficients c_ij of g^i y^j, keyed by (i, j).
using PolyCoeffs = std::map<std::pair<int, int>, double>;

class LossSpec {
 public:
  enum class Kind { Hinge, Squared, Polynomial, ClippedPolynomial };

  static LossSpec hinge();
  static LossSpec squared();
  // degree < 0 means "use the largest total degree present".
  static LossSpec polynomial(PolyCoeffs coeffs, int degree = -1);
  // Polynomial inside |g| <= g_bound and |y| <= y_bound, outside_value elsewhere.
  static LossSpec clipped_polynomial(PolyCoeffs coeffs, double g_bound,
                                     double y_bound, double outside_value,
                                     int degree = -1);

  Kind kind() const noexcept { return kind_; }
  const PolyCoeffs& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return degree_; }
  double g_bound() const noexcept { return g_bound_; }
  double y_bound() const noexcept { return y_bound_; }
  double outside_value() const noexcept { return outside_value_; }

  // Hinge and Squared: the solver's result is a true minimizer. Polynomial
  // variants are trained best-effort.
  bool convex_in_g() const noexcept {
    return kind_ == Kind::Hinge || kind_ == Kind::Squared;
  }
  bool requires_binary_labels() const noexcept { return kind_ == Kind::Hinge; }

 private:
  LossSpec() = default;

  Kind kind_ = Kind::Hinge;
  PolyCoeffs coeffs_;
  int degree_ = 0;
  double g_bound_ = 0.0;
  double y_bound_ = 0.0;
  double outside_value_ = 0.0;
};

double eval_loss(const LossSpec& loss, double g_value, double y);
// dL/dg; a subgradient for the hinge kink (0 taken at the kink).
double loss_derivative(const LossSpec& loss, double g_value, double y);

struct AffineSeparator {
  Vector w;
  double b = 0.0;
};

// Exponent vector alpha of a monomial x^alpha.
using MultiIndex = std::vector<int>;

// All alpha with |alpha| <= k in graded-lexicographic order: constant first,
// then degree 1 (x1, ..., xd), then degree 2 (x1^2, x1 x2, ..., xd^2), ...
// Within a degree, larger exponents of earlier coordinates come first.
std::vector<MultiIndex> monomial_exponents(std::size_t d, int k);

// binomial(d + k, d). Throws CountOverflow rather than wrapping.
std::uint64_t monomial_count(std::size_t d, int k);

// (x^alpha) for |alpha| <= k, ordered as monomial_exponents.
Vector lift(std::span<const double> x, int k);

// Precomputed monomial table for repeated lifting in a fixed (d, k). Each
// monomial is its parent monomial times one coordinate, so a lift costs one
// multiplication per output entry.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t d, int k);

  std::size_t input_dim() const noexcept { return d_; }
  int degree() const noexcept { return k_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  const std::vector<MultiIndex>& exponents() const noexcept { return exponents_; }
  // Position of alpha in the ordering, or size() when absent.
  std::size_t index_of(const MultiIndex& alpha) const;

  void lift_into(std::span<const double> x, std::span<double> out) const;
  Vector lift(std::span<const double> x) const;

 private:
  std::size_t d_;
  int k_;
  std::vector<MultiIndex> exponents_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> factor_;
};

class PolynomialSeparator {
 public:
  PolynomialSeparator(std::size_t input_dim, int degree, Vector coeffs);

  std::size_t input_dim() const noexcept { return input_dim_; }
  int degree() const noexcept { return degree_; }
  // Coefficients in monomial_exponents(input_dim, degree) order.
  const Vector& coeffs() const noexcept { return coeffs_; }
  double coefficient(const MultiIndex& alpha) const;

  // The affine separator over lifted features that this polynomial equals.
  AffineSeparator as_lifted_affine() const;
  const MonomialBasis& basis() const noexcept { return *basis_; }

 private:
  std::size_t input_dim_;
  int degree_;
  Vector coeffs_;
  std::shared_ptr<const MonomialBasis> basis_;
};

using Separator = std::variant<AffineSeparator, PolynomialSeparator>;

std::size_t input_dim(const Separator& sep);

double eval_separator(const AffineSeparator& sep, std::span<const double> x);
double eval_separator(const PolynomialSeparator& sep, std::span<const double> x);
double eval_separator(const Separator& sep, std::span<const double> x);

// +1 when g(x) >= 0, else -1.
int classify_value(double g_value) noexcept;
int classify(const Separator& sep, std::span<const double> x);

double empirical_risk(const Dataset& data, const Separator& sep,
                      const LossSpec& loss);

// beta1 * (share of y=+1 with g<0) + beta2 * (share of y=-1 with g>0).
double weighted_empirical_risk(const Dataset& data, const Separator& sep,
                               double beta1, double beta2);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  std::size_t errors() const noexcept { return fp + fn; }
  double error_rate() const noexcept {
    return total() == 0 ? 0.0
                        : static_cast<double>(errors()) /
                              static_cast<double>(total());
  }
};

ConfusionCounts confusion(const Dataset& data, const Separator& sep);

}  // namespace slt

#include "slt/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slt/error.hpp"

namespace slt {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double e) { return std::isfinite(e); });
}

bool is_binary_label(double y) { return y == 1.0 || y == -1.0; }

int max_total_degree(const PolyCoeffs& coeffs) {
  int degree = 0;
  for (const auto& [key, c] : coeffs) {
    if (c != 0.0) degree = std::max(degree, key.first + key.second);
  }
  return degree;
}

void validate_coeffs(const PolyCoeffs& coeffs, int degree) {
  for (const auto& [key, c] : coeffs) {
    if (key.first < 0 || key.second < 0) {
      throw InvalidInput("polynomial loss exponents must be non-negative");
    }
    if (!std::isfinite(c)) {
      throw InvalidInput("polynomial loss coefficients must be finite");
    }
    if (c != 0.0 && key.first + key.second > degree) {
      throw InvalidInput("polynomial loss degree " + std::to_string(degree) +
                         " is below the degree of a non-zero term");
    }
  }
}

double eval_polynomial(const PolyCoeffs& coeffs, double g, double y) {
  double total = 0.0;
  for (const auto& [key, c] : coeffs) {
    if (c == 0.0) continue;
    double term = c;
    for (int i = 0; i < key.first; ++i) term *= g;
    for (int j = 0; j < key.second; ++j) term *= y;
    total += term;
  }
  return total;
}

double polynomial_g_derivative(const PolyCoeffs& coeffs, double g, double y) {
  double total = 0.0;
  for (const auto& [key, c] : coeffs) {
    if (c == 0.0 || key.first == 0) continue;
    double term = c * key.first;
    for (int i = 1; i < key.first; ++i) term *= g;
    for (int j = 0; j < key.second; ++j) term *= y;
    total += term;
  }
  return total;
}

bool inside_region(const LossSpec& loss, double g, double y) {
  return std::abs(g) <= loss.g_bound() && std::abs(y) <= loss.y_bound();
}

void append_exponents(std::size_t d, std::size_t pos, int remaining,
                      MultiIndex& alpha, std::vector<MultiIndex>& out) {
  if (pos + 1 == d) {
    alpha[pos] = remaining;
    out.push_back(alpha);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    alpha[pos] = e;
    append_exponents(d, pos + 1, remaining - e, alpha, out);
  }
  alpha[pos] = 0;
}

}  // namespace

Dataset::Dataset(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidInput("dataset dimension must be positive");
}

Dataset::Dataset(std::size_t dim, std::vector<LabeledSample> samples)
    : Dataset(dim) {
  for (const auto& s : samples) validate(s);
  samples_ = std::move(samples);
}

void Dataset::validate(const LabeledSample& sample) const {
  if (sample.x.size() != dim_) {
    throw InvalidInput("sample has " + std::to_string(sample.x.size()) +
                       " features, dataset dimension is " +
                       std::to_string(dim_));
  }
  if (!all_finite(sample.x) || !std::isfinite(sample.y)) {
    throw InvalidInput("sample contains a non-finite value");
  }
}

void Dataset::add(LabeledSample sample) {
  validate(sample);
  samples_.push_back(std::move(sample));
}

bool Dataset::is_classification() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](const LabeledSample& s) { return is_binary_label(s.y); });
}

void Dataset::require_classification() const {
  if (!is_classification()) {
    throw InvalidInput("classification requires labels in {-1, +1}");
  }
}

void Dataset::require_nonempty() const {
  if (samples_.empty()) throw InvalidInput("dataset is empty");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(dim_);
  out.samples_.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= samples_.size()) throw InvalidInput("subset index out of range");
    out.samples_.push_back(samples_[i]);
  }
  return out;
}

Dataset Dataset::project(std::span<const std::size_t> coordinates) const {
  if (coordinates.empty()) throw InvalidInput("projection needs a coordinate");
  for (std::size_t c : coordinates) {
    if (c >= dim_) throw InvalidInput("projection coordinate out of range");
  }
  Dataset out(coordinates.size());
  out.samples_.reserve(samples_.size());
  for (const auto& s : samples_) {
    LabeledSample p;
    p.y = s.y;
    p.x.reserve(coordinates.size());
    for (std::size_t c : coordinates) p.x.push_back(s.x[c]);
    out.samples_.push_back(std::move(p));
  }
  return out;
}

LossSpec LossSpec::hinge() {
  LossSpec l;
  l.kind_ = Kind::Hinge;
  return l;
}

LossSpec LossSpec::squared() {
  LossSpec l;
  l.kind_ = Kind::Squared;
  l.coeffs_ = {{{2, 0}, 1.0}, {{1, 1}, -2.0}, {{0, 2}, 1.0}};
  l.degree_ = 2;
  return l;
}

LossSpec LossSpec::polynomial(PolyCoeffs coeffs, int degree) {
  if (degree < 0) degree = max_total_degree(coeffs);
  validate_coeffs(coeffs, degree);
  LossSpec l;
  l.kind_ = Kind::Polynomial;
  l.coeffs_ = std::move(coeffs);
  l.degree_ = degree;
  return l;
}

LossSpec LossSpec::clipped_polynomial(PolyCoeffs coeffs, double g_bound,
                                      double y_bound, double outside_value,
                                      int degree) {
  if (degree < 0) degree = max_total_degree(coeffs);
  validate_coeffs(coeffs, degree);
  if (!(g_bound > 0.0) || !std::isfinite(g_bound)) {
    throw InvalidInput("clipped loss needs a finite g bound M0 > 0");
  }
  if (!(y_bound >= 1.0) || !std::isfinite(y_bound)) {
    throw InvalidInput("clipped loss needs a finite y bound Y0 >= 1");
  }
  if (!std::isfinite(outside_value)) {
    throw InvalidInput("clipped loss outside value must be finite");
  }
  LossSpec l;
  l.kind_ = Kind::ClippedPolynomial;
  l.coeffs_ = std::move(coeffs);
  l.degree_ = degree;
  l.g_bound_ = g_bound;
  l.y_bound_ = y_bound;
  l.outside_value_ = outside_value;
  return l;
}

double eval_loss(const LossSpec& loss, double g_value, double y) {
  if (!std::isfinite(g_value) || !std::isfinite(y)) {
    throw InvalidInput("loss evaluated at a non-finite point");
  }
  switch (loss.kind()) {
    case LossSpec::Kind::Hinge:
      if (!is_binary_label(y)) {
        throw InvalidInput("hinge loss requires y in {-1, +1}");
      }
      return std::max(0.0, 1.0 - y * g_value);
    case LossSpec::Kind::Squared: {
      const double r = g_value - y;
      return r * r;
    }
    case LossSpec::Kind::Polynomial:
      return eval_polynomial(loss.coeffs(), g_value, y);
    case LossSpec::Kind::ClippedPolynomial:
      return inside_region(loss, g_value, y)
                 ? eval_polynomial(loss.coeffs(), g_value, y)
                 : loss.outside_value();
  }
  return 0.0;
}

double loss_derivative(const LossSpec& loss, double g_value, double y) {
  switch (loss.kind()) {
    case LossSpec::Kind::Hinge:
      return y * g_value < 1.0 ? -y : 0.0;
    case LossSpec::Kind::Squared:
      return 2.0 * (g_value - y);
    case LossSpec::Kind::Polynomial:
      return polynomial_g_derivative(loss.coeffs(), g_value, y);
    case LossSpec::Kind::ClippedPolynomial:
      return inside_region(loss, g_value, y)
                 ? polynomial_g_derivative(loss.coeffs(), g_value, y)
                 : 0.0;
  }
  return 0.0;
}

std::vector<MultiIndex> monomial_exponents(std::size_t d, int k) {
  if (d == 0) throw InvalidInput("monomials need d >= 1");
  if (k < 0) throw InvalidInput("monomial degree must be non-negative");
  const std::uint64_t count = monomial_count(d, k);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  MultiIndex alpha(d, 0);
  for (int degree = 0; degree <= k; ++degree) {
    append_exponents(d, 0, degree, alpha, out);
  }
  return out;
}

std::uint64_t monomial_count(std::size_t d, int k) {
  if (d == 0) throw InvalidInput("monomial_count needs d >= 1");
  if (k < 0) throw InvalidInput("monomial_count needs k >= 0");
  // C(d+i, i) = C(d+i-1, i-1) * (d+i) / i stays integral at every step.
  unsigned __int128 count = 1;
  for (int i = 1; i <= k; ++i) {
    count = count * (static_cast<unsigned __int128>(d) + i) /
            static_cast<unsigned __int128>(i);
    if (count > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw CountOverflow("monomial count binomial(" + std::to_string(d) +
                          "+" + std::to_string(k) + ", " + std::to_string(d) +
                          ") exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(count);
}

MonomialBasis::MonomialBasis(std::size_t d, int k)
    : d_(d), k_(k), exponents_(monomial_exponents(d, k)) {
  const std::size_t n = exponents_.size();
  parent_.assign(n, 0);
  factor_.assign(n, 0);
  for (std::size_t m = 1; m < n; ++m) {
    MultiIndex parent = exponents_[m];
    std::size_t j = 0;
    while (parent[j] == 0) ++j;
    --parent[j];
    parent_[m] = index_of(parent);
    factor_[m] = j;
  }
}

std::size_t MonomialBasis::index_of(const MultiIndex& alpha) const {
  if (alpha.size() != d_) return exponents_.size();
  int degree = 0;
  for (int e : alpha) {
    if (e < 0) return exponents_.size();
    degree += e;
  }
  if (degree > k_) return exponents_.size();
  // Blocks of equal degree are contiguous; search only the right block.
  const std::size_t begin =
      degree == 0 ? 0 : static_cast<std::size_t>(monomial_count(d_, degree - 1));
  const std::size_t end = static_cast<std::size_t>(monomial_count(d_, degree));
  for (std::size_t i = begin; i < end; ++i) {
    if (exponents_[i] == alpha) return i;
  }
  return exponents_.size();
}

void MonomialBasis::lift_into(std::span<const double> x,
                              std::span<double> out) const {
  if (x.size() != d_) throw InvalidInput("lift: dimension mismatch");
  if (out.size() != exponents_.size()) {
    throw InvalidInput("lift: output has the wrong length");
  }
  out[0] = 1.0;
  for (std::size_t m = 1; m < out.size(); ++m) {
    out[m] = out[parent_[m]] * x[factor_[m]];
  }
}

Vector MonomialBasis::lift(std::span<const double> x) const {
  Vector out(exponents_.size());
  lift_into(x, out);
  return out;
}

Vector lift(std::span<const double> x, int k) {
  if (x.empty()) throw InvalidInput("lift needs d >= 1");
  if (k < 1) throw InvalidInput("lift needs k >= 1");
  if (!all_finite(x)) throw InvalidInput("lift of a non-finite vector");
  return MonomialBasis(x.size(), k).lift(x);
}

PolynomialSeparator::PolynomialSeparator(std::size_t input_dim, int degree,
                                         Vector coeffs)
    : input_dim_(input_dim), degree_(degree), coeffs_(std::move(coeffs)) {
  if (input_dim == 0 || degree < 1) {
    throw InvalidInput("polynomial separator needs d >= 1 and k >= 1");
  }
  if (coeffs_.size() != monomial_count(input_dim, degree)) {
    throw InvalidInput("polynomial separator coefficient count mismatch");
  }
  if (!all_finite(coeffs_)) {
    throw InvalidInput("polynomial separator has non-finite coefficients");
  }
  basis_ = std::make_shared<const MonomialBasis>(input_dim, degree);
}

double PolynomialSeparator::coefficient(const MultiIndex& alpha) const {
  const std::size_t i = basis_->index_of(alpha);
  return i < coeffs_.size() ? coeffs_[i] : 0.0;
}

AffineSeparator PolynomialSeparator::as_lifted_affine() const {
  AffineSeparator a;
  a.b = coeffs_[0];
  a.w.assign(coeffs_.begin() + 1, coeffs_.end());
  return a;
}

std::size_t input_dim(const Separator& sep) {
  if (const auto* a = std::get_if<AffineSeparator>(&sep)) return a->w.size();
  return std::get<PolynomialSeparator>(sep).input_dim();
}

double eval_separator(const AffineSeparator& sep, std::span<const double> x) {
  if (x.size() != sep.w.size()) {
    throw InvalidInput("separator expects " + std::to_string(sep.w.size()) +
                       " features, got " + std::to_string(x.size()));
  }
  double g = sep.b;
  for (std::size_t i = 0; i < x.size(); ++i) g += sep.w[i] * x[i];
  return g;
}

double eval_separator(const PolynomialSeparator& sep, std::span<const double> x) {
  if (x.size() != sep.input_dim()) {
    throw InvalidInput("separator expects " + std::to_string(sep.input_dim()) +
                       " features, got " + std::to_string(x.size()));
  }
  // Accumulate monomials on the fly; the parent table keeps this at one
  // multiply-add per coefficient.
  thread_local Vector scratch;
  scratch.resize(sep.coeffs().size());
  sep.basis().lift_into(x, scratch);
  double g = 0.0;
  for (std::size_t i = 0; i < scratch.size(); ++i) g += sep.coeffs()[i] * scratch[i];
  return g;
}

double eval_separator(const Separator& sep, std::span<const double> x) {
  return std::visit([&](const auto& s) { return eval_separator(s, x); }, sep);
}

int classify_value(double g_value) noexcept { return g_value >= 0.0 ? 1 : -1; }

int classify(const Separator& sep, std::span<const double> x) {
  return classify_value(eval_separator(sep, x));
}

double empirical_risk(const Dataset& data, const Separator& sep,
                      const LossSpec& loss) {
  data.require_nonempty();
  double total = 0.0;
  for (const auto& s : data) total += eval_loss(loss, eval_separator(sep, s.x), s.y);
  return total / static_cast<double>(data.size());
}

double weighted_empirical_risk(const Dataset& data, const Separator& sep,
                               double beta1, double beta2) {
  if (beta1 < 0.0 || beta2 < 0.0 || std::abs(beta1 + beta2 - 1.0) > 1e-12) {
    throw InvalidInput("risk weights must be non-negative and sum to 1");
  }
  data.require_classification();
  std::size_t pos = 0, neg = 0, pos_missed = 0, neg_flagged = 0;
  for (const auto& s : data) {
    const int label = classify(sep, s.x);
    if (s.y > 0) {
      ++pos;
      if (label < 0) ++pos_missed;
    } else {
      ++neg;
      if (label > 0) ++neg_flagged;
    }
  }
  if (pos == 0 || neg == 0) {
    throw UndefinedClassRisk(
        "weighted risk needs samples of both classes");
  }
  return beta1 * static_cast<double>(pos_missed) / static_cast<double>(pos) +
         beta2 * static_cast<double>(neg_flagged) / static_cast<double>(neg);
}

ConfusionCounts confusion(const Dataset& data, const Separator& sep) {
  data.require_classification();
  ConfusionCounts c;
  for (const auto& s : data) {
    const int label = classify(sep, s.x);
    if (label > 0) {
      (s.y > 0 ? c.tp : c.fp)++;
    } else {
      (s.y < 0 ? c.tn : c.fn)++;
    }
  }
  return c;
}

}  // namespace slt

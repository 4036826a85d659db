#pragma once

// Closed-form generalization and deviation bounds, numeric inversion of the
// relative VC bound into a sample size, and small checkable inequalities.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slt/model.hpp"

namespace slt {

// 2^{-1/p} ((p-1)/(p-2))^{(p-1)/p}; requires p > 2.
double a_of_p(double p);

// 4 (h (ln(2n/h) + 1) - ln(delta/8)) / n. Negative when n is far below h/2.
double curly_E(double n, double h, double delta);

std::uint64_t vc_dim_affine(std::size_t d);
// Affine hypotheses composed with the hinge loss: one extra dimension.
std::uint64_t vc_dim_hinge_loss_family(std::size_t d);

struct VapnikBoundInputs {
  double n = 1;
  double h = 1;
  double delta = 0.05;
  double p = 4;
  double tau = 1;  // sup over the class of ||L||_p / ||L||_1, at least 1
  double J = 0;    // minimal in-class risk

  void validate() const;
};

struct BoundReport {
  double curly_E = 0.0;
  double a_p = 0.0;
  double bound_value = 0.0;  // +inf exactly when !in_valid_regime
  bool in_valid_regime = false;
  std::string dropped_terms_note;
};

// "bound=<v> regime=<bool> E=<v> a_p=<v> dropped=O(1/n)"
std::string format_bound_report(const BoundReport& report);

// J tau a sqrt(E) / (1 - tau a sqrt(E))_+ with the O(1/n) remainder omitted.
// Out of regime (denominator <= 0, or E <= 0 because n is below h/2) gives +inf.
BoundReport vapnik_relative_bound(const VapnikBoundInputs& in);

// Smallest n on the decreasing tail n >= max(1, ceil(h/2)) whose bound is
// <= eps. Throws UnboundedComplexity when no n below 2^62 qualifies.
std::uint64_t info_complexity_numeric(double eps, double delta, double h,
                                      double J, double tau, double p);

// (d+2)(2 J tau a)^2 (2 ln(1/eps) + ln ln(1/eps)) / eps^2, the leading terms
// only, valid for a fixed delta. nullopt when eps >= 1/e (ln ln undefined).
std::optional<double> info_complexity_asymptotic(double eps, double delta,
                                                 std::size_t d, double J,
                                                 double tau, double p);

// sigma / sqrt(delta n)
double chebyshev_deviation_bound(double sigma, double delta, double n);

struct DeviationBound {
  double value = 0.0;
  double confidence = 0.0;  // 1 - terms * delta, clamped at 0
  bool vacuous = false;     // terms * delta >= 1
};

struct PolyDeviationInputs {
  PolyCoeffs coeffs;
  double M = 1.0;               // L1 bound on (w, b)
  std::vector<double> moments;  // d_i = E[(|x| + 1)^{2i}], i = 0..max power of g
  double delta = 0.05;
  double n = 1;
  std::uint64_t l = 1;          // distinct monomials in x

  void validate() const;
};

// sum |c_ij| sqrt(d_i) (2M)^i / sqrt(delta n), at confidence 1 - l delta.
DeviationBound poly_risk_deviation_bound(const PolyDeviationInputs& in);

// (sum_{i+j>=1} |c_ij| M0^i + |c_00 - C| / 2) / sqrt(delta n), at confidence
// 1 - m delta. Depends on no moment of the data distribution.
DeviationBound clipped_poly_deviation_bound(const PolyCoeffs& coeffs, double M0,
                                            double C, double delta, double n,
                                            std::uint64_t m);

// Number of monomials x^alpha an affine g can produce in L(g(x), y):
// monomial_count(d, largest power of g with a nonzero coefficient).
std::uint64_t lifted_term_count(const PolyCoeffs& coeffs, std::size_t d);
// Nonzero c_ij.
std::uint64_t nonzero_term_count(const PolyCoeffs& coeffs);

// d_i for i = 0..k with |x| the Euclidean norm; d_0 = 1.
std::vector<double> estimate_moments(const Dataset& data, int k);

struct InfSwapResult {
  bool holds = false;
  double lhs = 0.0;  // |f(arg inf g) - inf f|
  double rhs = 0.0;  // 2 sup |f - g|
  std::size_t argmin_g = 0;
};

// Inf-swap check on a finite set: |f(arg inf g) - inf f| <= 2 sup |f - g|.
// Ties in arg inf go to the lowest index.
InfSwapResult check_inf_swap(std::span<const double> f, std::span<const double> g);

// Plug-in estimates that replace the unknown distribution by the sample, so
// they are local to it. tau: max over candidates of the empirical
// ||L||_p / ||L||_1 (candidates with zero empirical loss are skipped).
double plugin_tau(const Dataset& data, std::span<const Separator> candidates,
                  const LossSpec& loss, double p);
// J: min over candidates of the empirical risk.
double plugin_J(const Dataset& data, std::span<const Separator> candidates,
                const LossSpec& loss);

}  // namespace slt

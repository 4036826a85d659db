#include "slt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "slt/error.hpp"
#include "slt/serialize.hpp"

namespace slt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSearchLimit = std::uint64_t{1} << 62;

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

void require_delta(double delta) {
  require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
          "delta must lie in (0, 1)");
}

int max_g_power(const PolyCoeffs& coeffs) {
  int top = 0;
  for (const auto& [key, c] : coeffs) {
    if (c != 0.0) top = std::max(top, key.first);
  }
  return top;
}

DeviationBound with_confidence(double value, double terms, double delta) {
  DeviationBound out;
  out.value = value;
  out.vacuous = terms * delta >= 1.0;
  out.confidence = std::max(0.0, 1.0 - terms * delta);
  return out;
}

}  // namespace

double a_of_p(double p) {
  require(std::isfinite(p) && p > 2.0, "a(p) requires p > 2");
  return std::exp2(-1.0 / p) * std::pow((p - 1.0) / (p - 2.0), (p - 1.0) / p);
}

double curly_E(double n, double h, double delta) {
  require(std::isfinite(n) && n >= 1.0, "n must be >= 1");
  require(std::isfinite(h) && h >= 1.0, "h must be >= 1");
  require_delta(delta);
  return 4.0 * (h * (std::log(2.0 * n / h) + 1.0) - std::log(delta / 8.0)) / n;
}

std::uint64_t vc_dim_affine(std::size_t d) {
  require(d >= 1, "dimension must be >= 1");
  return d + 1;
}

std::uint64_t vc_dim_hinge_loss_family(std::size_t d) {
  require(d >= 1, "dimension must be >= 1");
  return d + 2;
}

void VapnikBoundInputs::validate() const {
  require(std::isfinite(n) && n >= 1.0, "n must be >= 1");
  require(std::isfinite(h) && h >= 1.0, "h must be >= 1");
  require_delta(delta);
  require(std::isfinite(p) && p > 2.0, "p must be > 2");
  require(std::isfinite(tau) && tau >= 1.0, "tau must be >= 1");
  require(std::isfinite(J) && J >= 0.0, "J must be >= 0");
}

std::string format_bound_report(const BoundReport& report) {
  return fmt::format("bound={} regime={} E={} a_p={} dropped=O(1/n)",
                     format_real(report.bound_value),
                     report.in_valid_regime ? "true" : "false",
                     format_real(report.curly_E), format_real(report.a_p));
}

BoundReport vapnik_relative_bound(const VapnikBoundInputs& in) {
  in.validate();
  BoundReport r;
  r.curly_E = curly_E(in.n, in.h, in.delta);
  r.a_p = a_of_p(in.p);
  r.dropped_terms_note = "O(1/n)";
  if (r.curly_E <= 0.0) {
    r.in_valid_regime = false;
    r.bound_value = kInf;
    return r;
  }
  const double x = in.tau * r.a_p * std::sqrt(r.curly_E);
  const double denom = 1.0 - x;
  if (denom <= 0.0) {
    r.in_valid_regime = false;
    r.bound_value = kInf;
    return r;
  }
  r.in_valid_regime = true;
  r.bound_value = in.J == 0.0 ? 0.0 : in.J * x / denom;
  return r;
}

std::uint64_t info_complexity_numeric(double eps, double delta, double h,
                                      double J, double tau, double p) {
  require(std::isfinite(eps) && eps > 0.0, "eps must be > 0");
  VapnikBoundInputs in;
  in.h = h;
  in.delta = delta;
  in.p = p;
  in.tau = tau;
  in.J = J;
  in.validate();

  auto ok = [&](std::uint64_t n) {
    in.n = static_cast<double>(n);
    return vapnik_relative_bound(in).bound_value <= eps;
  };

  const std::uint64_t lo_start =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(h / 2.0)));
  if (ok(lo_start)) return lo_start;

  // ok(lo) is false, ok(hi) is true.
  std::uint64_t lo = lo_start;
  std::uint64_t hi = lo_start;
  for (;;) {
    if (hi >= kSearchLimit) {
      throw UnboundedComplexity(fmt::format(
          "no sample size below 2^62 brings the bound under eps={}", eps));
    }
    hi = std::min(kSearchLimit, hi * 2);
    if (ok(hi)) break;
    lo = hi;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::optional<double> info_complexity_asymptotic(double eps, double delta,
                                                 std::size_t d, double J,
                                                 double tau, double p) {
  require(std::isfinite(eps) && eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  require_delta(delta);
  require(d >= 1, "dimension must be >= 1");
  require(std::isfinite(J) && J >= 0.0, "J must be >= 0");
  require(std::isfinite(tau) && tau >= 1.0, "tau must be >= 1");
  if (eps >= std::exp(-1.0)) return std::nullopt;
  const double h = static_cast<double>(vc_dim_hinge_loss_family(d));
  const double scale = 2.0 * J * tau * a_of_p(p);
  const double log_inv = std::log(1.0 / eps);
  return h * scale * scale * (2.0 * log_inv + std::log(log_inv)) / (eps * eps);
}

double chebyshev_deviation_bound(double sigma, double delta, double n) {
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be >= 0");
  require_delta(delta);
  require(std::isfinite(n) && n >= 1.0, "n must be >= 1");
  return sigma / std::sqrt(delta * n);
}

void PolyDeviationInputs::validate() const {
  require(std::isfinite(M) && M > 0.0, "M must be > 0");
  require_delta(delta);
  require(std::isfinite(n) && n >= 1.0, "n must be >= 1");
  require(l >= 1, "term count l must be >= 1");
  const int top = max_g_power(coeffs);
  require(moments.size() > static_cast<std::size_t>(top),
          "need a moment d_i for every power of g in the loss");
  for (double m : moments) {
    require(std::isfinite(m) && m >= 1.0, "moments d_i must be >= 1");
  }
  for (const auto& [key, c] : coeffs) {
    require(key.first >= 0 && key.second >= 0, "exponents must be >= 0");
    require(std::isfinite(c), "coefficients must be finite");
  }
}

DeviationBound poly_risk_deviation_bound(const PolyDeviationInputs& in) {
  in.validate();
  double sum = 0.0;
  for (const auto& [key, c] : in.coeffs) {
    const auto i = static_cast<std::size_t>(key.first);
    sum += std::abs(c) * std::sqrt(in.moments[i]) * std::pow(2.0 * in.M, key.first);
  }
  return with_confidence(sum / std::sqrt(in.delta * in.n),
                         static_cast<double>(in.l), in.delta);
}

DeviationBound clipped_poly_deviation_bound(const PolyCoeffs& coeffs, double M0,
                                            double C, double delta, double n,
                                            std::uint64_t m) {
  require(std::isfinite(M0) && M0 > 0.0, "M0 must be > 0");
  require(std::isfinite(C), "C must be finite");
  require_delta(delta);
  require(std::isfinite(n) && n >= 1.0, "n must be >= 1");
  require(m >= 1, "term count m must be >= 1");
  double sum = 0.0;
  double c00 = 0.0;
  for (const auto& [key, c] : coeffs) {
    require(key.first >= 0 && key.second >= 0, "exponents must be >= 0");
    require(std::isfinite(c), "coefficients must be finite");
    if (key.first == 0 && key.second == 0) {
      c00 = c;
    } else {
      sum += std::abs(c) * std::pow(M0, key.first);
    }
  }
  sum += std::abs(c00 - C) / 2.0;
  return with_confidence(sum / std::sqrt(delta * n), static_cast<double>(m), delta);
}

std::uint64_t lifted_term_count(const PolyCoeffs& coeffs, std::size_t d) {
  return monomial_count(d, max_g_power(coeffs));
}

std::uint64_t nonzero_term_count(const PolyCoeffs& coeffs) {
  return static_cast<std::uint64_t>(std::count_if(
      coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second != 0.0; }));
}

std::vector<double> estimate_moments(const Dataset& data, int k) {
  data.require_nonempty();
  require(k >= 0, "moment order must be >= 0");
  std::vector<double> d(static_cast<std::size_t>(k) + 1, 0.0);
  for (const auto& s : data) {
    double norm2 = 0.0;
    for (double v : s.x) norm2 += v * v;
    const double base = (std::sqrt(norm2) + 1.0) * (std::sqrt(norm2) + 1.0);
    double power = 1.0;
    for (int i = 0; i <= k; ++i) {
      d[static_cast<std::size_t>(i)] += power;
      power *= base;
    }
  }
  for (double& v : d) v /= static_cast<double>(data.size());
  d[0] = 1.0;
  return d;
}

InfSwapResult check_inf_swap(std::span<const double> f, std::span<const double> g) {
  require(!f.empty(), "inf-swap check needs at least one point");
  require(f.size() == g.size(), "f and g must have equal length");
  InfSwapResult r;
  double inf_f = f[0];
  double inf_g = g[0];
  double sup_diff = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    inf_f = std::min(inf_f, f[i]);
    if (g[i] < inf_g) {
      inf_g = g[i];
      r.argmin_g = i;
    }
    sup_diff = std::max(sup_diff, std::abs(f[i] - g[i]));
  }
  r.lhs = std::abs(f[r.argmin_g] - inf_f);
  r.rhs = 2.0 * sup_diff;
  r.holds = r.lhs <= r.rhs;
  return r;
}

double plugin_tau(const Dataset& data, std::span<const Separator> candidates,
                  const LossSpec& loss, double p) {
  data.require_nonempty();
  require(!candidates.empty(), "need at least one candidate separator");
  require(std::isfinite(p) && p > 2.0, "p must be > 2");
  double tau = 1.0;
  for (const auto& sep : candidates) {
    double m1 = 0.0;
    double mp = 0.0;
    for (const auto& s : data) {
      const double v = std::abs(eval_loss(loss, eval_separator(sep, s.x), s.y));
      m1 += v;
      mp += std::pow(v, p);
    }
    if (m1 <= 0.0) continue;
    const double n = static_cast<double>(data.size());
    tau = std::max(tau, std::pow(mp / n, 1.0 / p) / (m1 / n));
  }
  return tau;
}

double plugin_J(const Dataset& data, std::span<const Separator> candidates,
                const LossSpec& loss) {
  data.require_nonempty();
  require(!candidates.empty(), "need at least one candidate separator");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& sep : candidates) best = std::min(best, empirical_risk(data, sep, loss));
  return best;
}

}  // namespace slt

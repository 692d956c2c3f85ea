#include "gravinv/regparam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gravinv/errors.hpp"

namespace gravinv {

AlphaGrid::AlphaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) {
    throw DomainError("an alpha grid needs at least three points");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
      throw DomainError("alpha grid values must be positive and finite");
    }
    if (k > 0 && !(values_[k] > values_[k - 1])) {
      throw DomainError("alpha grid must be strictly increasing");
    }
  }
}

AlphaGrid AlphaGrid::log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw DomainError("log-spaced grid needs 0 < lo < hi");
  }
  if (count < 3) throw DomainError("an alpha grid needs at least three points");
  std::vector<double> v(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    v[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  v.front() = lo;
  v.back() = hi;
  return AlphaGrid(std::move(v));
}

AlphaGrid AlphaGrid::for_spectrum(const Vector& gamma, std::size_t count, double floor) {
  double gmax = 0.0;
  double gmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (gamma[i] > 0.0) {
      gmax = std::max(gmax, gamma[i]);
      gmin = std::min(gmin, gamma[i]);
    }
  }
  if (!(gmax > 0.0)) throw DomainError("no nonzero generalized singular values");
  double lo = std::max(floor, floor * gmin);
  const double hi = 10.0 * gmax;
  if (!(lo < hi)) lo = hi * 1e-6;
  return log_spaced(lo, hi, count);
}

const char* to_string(ParamStatus status) {
  switch (status) {
    case ParamStatus::ok: return "ok";
    case ParamStatus::flat_gcv_fallback: return "flat-gcv-fallback";
    case ParamStatus::boundary_warning: return "boundary-warning";
    case ParamStatus::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

// Returns +inf when the degrees of freedom vanish.
double gcv_from_residual(const GsvdFactors& factors, double alpha, double residual_norm) {
  const Vector f = filter_factors(factors, alpha);
  const double dof = static_cast<double>(factors.m()) - f.sum();
  if (!(dof > static_cast<double>(factors.m()) * 1e-14)) {
    return std::numeric_limits<double>::infinity();
  }
  return residual_norm * residual_norm / (dof * dof);
}

}  // namespace

std::vector<CurvePoint> trace_curve(const GsvdFactors& factors, const Vector& r_tilde,
                                    const AlphaGrid& grid) {
  const Vector coeffs = spectral_coefficients(factors, r_tilde);
  std::vector<CurvePoint> curve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double alpha = grid[k];
    const FilteredNorms norms = filtered_norms(factors, coeffs, alpha);
    curve[k] = {alpha, norms.residual, norms.seminorm,
                gcv_from_residual(factors, alpha, norms.residual), 0.0};
  }
  return curve;
}

ParamChoiceResult lcurve_corner(const GsvdFactors& factors, const Vector& r_tilde,
                                const AlphaGrid& grid) {
  ParamChoiceResult result;
  result.curve = trace_curve(factors, r_tilde, grid);
  auto& curve = result.curve;
  const std::size_t n = curve.size();
  for (const auto& p : curve) {
    if (!(p.seminorm > 0.0) || !(p.residual_norm > 0.0)) {
      throw DomainError("degenerate L-curve: residual or seminorm vanishes on the grid");
    }
  }
  std::vector<double> xi(n), eta(n), s(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    xi[k] = std::log(curve[k].residual_norm);
    eta[k] = std::log(curve[k].seminorm);
    if (k > 0) s[k] = s[k - 1] + std::hypot(xi[k] - xi[k - 1], eta[k] - eta[k - 1]);
  }
  std::size_t best = 1;
  double best_kappa = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double hl = s[k] - s[k - 1];
    const double hr = s[k + 1] - s[k];
    double kappa = 0.0;
    if (hl > 0.0 && hr > 0.0) {
      // Centered differences in arclength on the non-uniform point spacing.
      const double d1x = (xi[k + 1] - xi[k - 1]) / (hl + hr);
      const double d1y = (eta[k + 1] - eta[k - 1]) / (hl + hr);
      const double d2x = 2.0 * ((xi[k + 1] - xi[k]) / hr - (xi[k] - xi[k - 1]) / hl) / (hl + hr);
      const double d2y = 2.0 * ((eta[k + 1] - eta[k]) / hr - (eta[k] - eta[k - 1]) / hl) / (hl + hr);
      const double speed2 = d1x * d1x + d1y * d1y;
      if (speed2 > 0.0) kappa = (d1x * d2y - d1y * d2x) / std::pow(speed2, 1.5);
    }
    curve[k].curvature = kappa;
    if (kappa > best_kappa) {
      best_kappa = kappa;
      best = k;
    }
  }
  result.alpha_star = curve[best].alpha;
  result.status = (best == 1 || best + 2 == n) ? ParamStatus::boundary_warning : ParamStatus::ok;
  return result;
}

double gcv_evaluate(const GsvdFactors& factors, const Vector& r_tilde, double alpha) {
  const Vector coeffs = spectral_coefficients(factors, r_tilde);
  const Vector f = filter_factors(factors, alpha);
  const Eigen::Index m = factors.m();
  double num = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double v = (1.0 - f[factors.q + k]) * coeffs[k];
    num += v * v;
  }
  const double dof = static_cast<double>(m) - f.sum();
  if (!(dof > static_cast<double>(m) * 1e-14)) {
    throw NumericalError("GCV denominator underflow (sum of filter factors reaches m)");
  }
  return num / (dof * dof);
}

ParamChoiceResult gcv_minimize(const GsvdFactors& factors, const Vector& r_tilde,
                               const AlphaGrid& grid, std::optional<double> alpha_prev,
                               double flat_tolerance) {
  ParamChoiceResult result;
  result.curve = trace_curve(factors, r_tilde, grid);
  const auto& curve = result.curve;
  std::size_t best = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double v = curve[k].gcv;
    if (!std::isfinite(v)) continue;
    hi = std::max(hi, v);
    if (v < lo) {
      lo = v;
      best = k;
    }
  }
  if (!std::isfinite(lo)) {
    throw NumericalError("GCV is not finite anywhere on the alpha grid");
  }
  const bool flat = !(hi > 0.0) || (hi - lo) / hi < flat_tolerance;
  const bool at_end = best == 0 || best + 1 == curve.size();
  result.alpha_star = curve[best].alpha;
  if (flat || at_end) {
    result.status = ParamStatus::flat_gcv_fallback;
    if (alpha_prev) result.alpha_star = *alpha_prev;
  }
  return result;
}

double initial_alpha(const Vector& gamma, GammaMean mean) {
  double gmax = 0.0;
  double sum = 0.0;
  Eigen::Index nonzero = 0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    gmax = std::max(gmax, gamma[i]);
    sum += gamma[i];
    if (gamma[i] > 0.0) ++nonzero;
  }
  if (nonzero == 0) throw DomainError("initial alpha undefined: all gamma are zero");
  const double count = mean == GammaMean::nonzero ? static_cast<double>(nonzero)
                                                  : static_cast<double>(gamma.size());
  return gmax / (sum / count);
}

void validate_cooling(double c) {
  if (!(c >= 0.01 && c <= 0.5)) {
    throw ConfigError("cooling constant c must lie in [0.01, 0.5], got " + std::to_string(c));
  }
}

double cooled_alpha(double alpha_prev, double alpha_star, double c) {
  validate_cooling(c);
  return std::max(c * alpha_prev, alpha_star);
}

}  // namespace gravinv

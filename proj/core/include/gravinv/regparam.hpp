#pragma once

#include <optional>
#include <vector>

#include "gravinv/gsvd.hpp"

namespace gravinv {

/// Log-spaced, strictly increasing candidate regularization parameters.
class AlphaGrid {
 public:
  explicit AlphaGrid(std::vector<double> values);

  /// `count` points log-spaced over [lo, hi].
  static AlphaGrid log_spaced(double lo, double hi, std::size_t count);

  /// Default grid for a factorization: `count` points over
  /// [max(floor, floor * gamma_min+), 10 * gamma_max], gamma_min+ being the
  /// smallest nonzero generalized singular value.
  static AlphaGrid for_spectrum(const Vector& gamma, std::size_t count = 200,
                                double floor = 1e-2);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

 private:
  std::vector<double> values_;
};

enum class ParamStatus { ok, flat_gcv_fallback, boundary_warning, degenerate };

const char* to_string(ParamStatus status);

struct CurvePoint {
  double alpha = 0.0;
  double residual_norm = 0.0;
  double seminorm = 0.0;
  double gcv = 0.0;
  /// Signed curvature of the log-log L-curve (0 at the grid ends).
  double curvature = 0.0;
};

struct ParamChoiceResult {
  double alpha_star = 0.0;
  std::vector<CurvePoint> curve;
  ParamStatus status = ParamStatus::ok;
};

/// Residual norm, seminorm and GCV value at every grid point.
std::vector<CurvePoint> trace_curve(const GsvdFactors& factors, const Vector& r_tilde,
                                    const AlphaGrid& grid);

/// Corner of the L-curve (log ||Gt x - r||, log ||D x||): the grid point of
/// maximum signed curvature, derivatives taken by centered differences in the
/// arclength of the sampled curve. A maximum on the first or last interior point is flagged as
/// boundary_warning. Throws DomainError when the seminorm vanishes on the
/// whole grid.
ParamChoiceResult lcurve_corner(const GsvdFactors& factors, const Vector& r_tilde,
                                const AlphaGrid& grid);

/// GCV(alpha) = ||sum_i (1 - f_i) u_{i-q}^T r||^2 / (m - sum_i f_i)^2.
/// Throws NumericalError when the denominator underflows.
double gcv_evaluate(const GsvdFactors& factors, const Vector& r_tilde, double alpha);

/// Grid minimizer of GCV. A flat curve ((max - min)/max < flat_tolerance) or a
/// minimizer on a grid end returns flat_gcv_fallback with alpha_star set to
/// `alpha_prev`, or to the grid argmin when no previous value exists.
ParamChoiceResult gcv_minimize(const GsvdFactors& factors, const Vector& r_tilde,
                               const AlphaGrid& grid,
                               std::optional<double> alpha_prev = std::nullopt,
                               double flat_tolerance = 1e-3);

/// Which gamma values enter the mean of the initial-alpha heuristic.
enum class GammaMean { nonzero, all };

/// max(gamma) / mean(gamma). Throws DomainError if every gamma is zero.
double initial_alpha(const Vector& gamma, GammaMean mean = GammaMean::nonzero);

/// max(c * alpha_prev, alpha_star). Throws ConfigError unless 0.01 <= c <= 0.5.
double cooled_alpha(double alpha_prev, double alpha_star, double c);

/// Throws ConfigError unless 0.01 <= c <= 0.5.
void validate_cooling(double c);

}  // namespace gravinv

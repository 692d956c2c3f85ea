#pragma once

#include <cstddef>

#include "gravinv/geometry.hpp"

namespace gravinv {

/// Newtonian constant of gravitation, m^3 kg^-1 s^-2.
inline constexpr double kGravitationalConstant = 6.674e-11;

/// 2*G with density in g/cm^3 (x1e3 -> kg/m^3) and the result in mGal
/// (x1e5 from m/s^2). Multiplies the dimensionless polygon line sum.
inline constexpr double kPolygonScale = 2.0 * kGravitationalConstant * 1e3 * 1e5;

/// Vertical gravity anomaly sampled at the stations, mGal.
struct GravityProfile {
  StationSet stations;
  Vector values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// Contribution of the polygon edge a -> b to the line-integral form of the
/// 2-D vertical attraction, for a station at the origin (z down).
///
/// With psi = dx/dz and nu = x_a - psi*z_a the term is
///   nu/(1+psi^2) * (log(r_b/r_a) - psi*(theta_b - theta_a)).
/// Horizontal edges take the analytic limit z_a*(theta_b - theta_a). Angles are
/// atan2(z, x) with the per-edge jump folded into [-pi, pi].
/// Throws GeometryError if either endpoint sits on the origin.
double edge_term(Point a, Point b);

/// Anomaly in mGal at the origin due to a polygon (station-centred
/// coordinates) with uniform density contrast in g/cm^3.
double polygon_gravity(const Polygon& poly, double density);

/// Dense m x n kernel mapping cell densities (g/cm^3) to anomalies (mGal).
class SensitivityMatrix {
 public:
  SensitivityMatrix(SurveyGrid grid, StationSet stations, Matrix entries);

  const SurveyGrid& grid() const { return grid_; }
  const StationSet& stations() const { return stations_; }
  const Matrix& matrix() const { return entries_; }
  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  SurveyGrid grid_;
  StationSet stations_;
  Matrix entries_;
};

/// Builds G_ij = polygon_gravity(cell j seen from station i, 1 g/cm^3).
///
/// Rows are distributed over `threads` workers; each entry is computed with
/// the same fixed edge order, so the result does not depend on the thread
/// count.
SensitivityMatrix assemble_sensitivity(const SurveyGrid& grid,
                                       const StationSet& stations,
                                       unsigned threads = 1);

/// d = G m.
GravityProfile forward_map(const SensitivityMatrix& g, const Vector& model);

}  // namespace gravinv

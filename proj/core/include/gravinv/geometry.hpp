#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gravinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point in the (x, z) cross-section, metres. z is positive downward.
struct Point {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Uniform grid of square cells below the profile.
///
/// Cells are indexed row-major with row 0 the shallowest and column 0 the
/// leftmost, so cell j lives at row j / n_cols and column j % n_cols.
class SurveyGrid {
 public:
  SurveyGrid(std::size_t n_cols, std::size_t n_rows, double cell_size,
             double x_origin = 0.0, double z_top = 0.0);

  std::size_t n_cols() const { return n_cols_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t cell_count() const { return n_cols_ * n_rows_; }
  double cell_size() const { return cell_size_; }
  double x_origin() const { return x_origin_; }
  double z_top() const { return z_top_; }

  std::size_t row_of(std::size_t j) const { return j / n_cols_; }
  std::size_t col_of(std::size_t j) const { return j % n_cols_; }
  std::size_t index(std::size_t row, std::size_t col) const {
    return row * n_cols_ + col;
  }

  /// Centre of cell j; throws GeometryError when j is out of range.
  Point cell_center(std::size_t j) const;

  double x_min() const { return x_origin_; }
  double x_max() const { return x_origin_ + cell_size_ * static_cast<double>(n_cols_); }
  double z_bottom() const { return z_top_ + cell_size_ * static_cast<double>(n_rows_); }

  friend bool operator==(const SurveyGrid&, const SurveyGrid&) = default;

 private:
  std::size_t n_cols_;
  std::size_t n_rows_;
  double cell_size_;
  double x_origin_;
  double z_top_;
};

/// Observation stations along a flat profile at depth z_obs (0 = surface,
/// negative = above the surface).
class StationSet {
 public:
  StationSet(std::vector<double> x, double z_obs = 0.0);

  /// Stations at the horizontal centres of the grid columns, on the surface.
  static StationSet centered_over(const SurveyGrid& grid, double z_obs = 0.0);

  std::size_t size() const { return x_.size(); }
  std::span<const double> x() const { return x_; }
  double x(std::size_t i) const { return x_[i]; }
  double z_obs() const { return z_obs_; }

  /// Common spacing if the stations are uniformly spaced to a relative
  /// tolerance, otherwise 0.
  double uniform_spacing(double rel_tol = 1e-9) const;

  friend bool operator==(const StationSet&, const StationSet&) = default;

 private:
  std::vector<double> x_;
  double z_obs_;
};

/// Simple closed polygon; the closing edge from the last vertex back to the
/// first is implicit. Vertices are stored clockwise in the (x, z-down) plane;
/// a counter-clockwise input is reversed (first vertex kept).
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t p) const { return vertices_[p]; }

  /// Shoelace area in the (x, z-down) plane. Positive for clockwise traversal
  /// as seen with z pointing down the page.
  double signed_area() const;

  Polygon translated(double dx, double dz) const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> vertices_;
};

/// Square of cell j, clockwise in the (x, z-down) plane starting at the
/// top-left corner: (x0,z0), (x0+h,z0), (x0+h,z0+h), (x0,z0+h).
Polygon cell_polygon(const SurveyGrid& grid, std::size_t j);

/// Cell j expressed once per station in station-centred coordinates,
/// x' = x - x_station and z' = z - z_obs.
std::vector<Polygon> station_offsets(const SurveyGrid& grid,
                                     const StationSet& stations, std::size_t j);

/// Throws GeometryError when a station would coincide with a cell vertex or
/// sit inside the grid (z_obs below the top of the grid).
void validate_layout(const SurveyGrid& grid, const StationSet& stations);

}  // namespace gravinv

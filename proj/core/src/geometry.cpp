#include "gravinv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gravinv/errors.hpp"

namespace gravinv {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.z, b.z) <= p.z && p.z <= std::max(a.z, b.z);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

}  // namespace

SurveyGrid::SurveyGrid(std::size_t n_cols, std::size_t n_rows, double cell_size,
                       double x_origin, double z_top)
    : n_cols_(n_cols), n_rows_(n_rows), cell_size_(cell_size),
      x_origin_(x_origin), z_top_(z_top) {
  if (n_cols == 0 || n_rows == 0) {
    throw GeometryError("grid must have at least one row and one column");
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw GeometryError("cell size must be positive and finite");
  }
  if (!std::isfinite(x_origin) || !std::isfinite(z_top) || z_top < 0.0) {
    throw GeometryError("grid origin must be finite with z_top >= 0");
  }
}

Point SurveyGrid::cell_center(std::size_t j) const {
  if (j >= cell_count()) {
    throw GeometryError("cell index " + std::to_string(j) + " out of range");
  }
  const double h = cell_size_;
  return {x_origin_ + h * (static_cast<double>(col_of(j)) + 0.5),
          z_top_ + h * (static_cast<double>(row_of(j)) + 0.5)};
}

StationSet::StationSet(std::vector<double> x, double z_obs)
    : x_(std::move(x)), z_obs_(z_obs) {
  if (x_.size() < 2) {
    throw GeometryError("at least two stations are required");
  }
  if (!std::isfinite(z_obs_)) {
    throw GeometryError("observation depth must be finite");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i])) {
      throw GeometryError("station " + std::to_string(i) + " has a non-finite x");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      throw GeometryError("station abscissae must be strictly increasing (station " +
                          std::to_string(i) + ")");
    }
  }
}

StationSet StationSet::centered_over(const SurveyGrid& grid, double z_obs) {
  std::vector<double> x(grid.n_cols());
  for (std::size_t c = 0; c < x.size(); ++c) {
    x[c] = grid.x_origin() + grid.cell_size() * (static_cast<double>(c) + 0.5);
  }
  return StationSet(std::move(x), z_obs);
}

double StationSet::uniform_spacing(double rel_tol) const {
  const double h = (x_.back() - x_.front()) / static_cast<double>(x_.size() - 1);
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (std::abs((x_[i] - x_[i - 1]) - h) > rel_tol * h) return 0.0;
  }
  return h;
}

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    throw GeometryError("polygon needs at least three vertices");
  }
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.z)) {
      throw GeometryError("polygon vertex is not finite");
    }
  }
  // Non-adjacent edges must not touch.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool adjacent = (b == a + 1) || (a == 0 && b == n - 1);
      if (adjacent) continue;
      if (segments_touch(vertices_[a], vertices_[(a + 1) % n], vertices_[b],
                         vertices_[(b + 1) % n])) {
        throw GeometryError("polygon is not simple");
      }
    }
  }
  const double area = signed_area();
  if (area == 0.0) {
    throw GeometryError("polygon has zero area");
  }
  if (area < 0.0) std::reverse(vertices_.begin() + 1, vertices_.end());
}

double Polygon::signed_area() const {
  double twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t p = 0; p < n; ++p) {
    const Point& a = vertices_[p];
    const Point& b = vertices_[(p + 1) % n];
    twice += a.x * b.z - b.x * a.z;
  }
  return 0.5 * twice;
}

Polygon Polygon::translated(double dx, double dz) const {
  std::vector<Point> shifted(vertices_.begin(), vertices_.end());
  for (auto& v : shifted) {
    v.x += dx;
    v.z += dz;
  }
  return Polygon(std::move(shifted));
}

Polygon cell_polygon(const SurveyGrid& grid, std::size_t j) {
  if (j >= grid.cell_count()) {
    throw GeometryError("cell index " + std::to_string(j) + " out of range (n=" +
                        std::to_string(grid.cell_count()) + ")");
  }
  const double h = grid.cell_size();
  const double x0 = grid.x_origin() + h * static_cast<double>(grid.col_of(j));
  const double z0 = grid.z_top() + h * static_cast<double>(grid.row_of(j));
  return Polygon({{x0, z0}, {x0 + h, z0}, {x0 + h, z0 + h}, {x0, z0 + h}});
}

std::vector<Polygon> station_offsets(const SurveyGrid& grid,
                                     const StationSet& stations, std::size_t j) {
  const Polygon cell = cell_polygon(grid, j);
  std::vector<Polygon> out;
  out.reserve(stations.size());
  for (double xs : stations.x()) {
    out.push_back(cell.translated(-xs, -stations.z_obs()));
  }
  return out;
}

void validate_layout(const SurveyGrid& grid, const StationSet& stations) {
  const double h = grid.cell_size();
  const double tol = 1e-9 * h;
  if (stations.z_obs() > grid.z_top() + tol) {
    throw GeometryError("observation plane lies below the top of the grid");
  }
  if (std::abs(stations.z_obs() - grid.z_top()) > tol) return;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double u = (stations.x(i) - grid.x_origin()) / h;
    const double k = std::round(u);
    if (k >= 0.0 && k <= static_cast<double>(grid.n_cols()) && std::abs(u - k) * h <= tol) {
      throw GeometryError("station " + std::to_string(i) +
                          " coincides with a cell vertex at x=" +
                          std::to_string(stations.x(i)));
    }
  }
}

}  // namespace gravinv

#include "gravinv/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "gravinv/errors.hpp"

namespace gravinv {

namespace {

double fold_angle(double d) {
  constexpr double pi = std::numbers::pi;
  if (d > pi) return d - 2.0 * pi;
  if (d < -pi) return d + 2.0 * pi;
  return d;
}

// Sum of edge terms of the 4-vertex cell as seen from (xs, zs).
double cell_line_sum(const std::array<Point, 4>& corners, double xs, double zs) {
  std::array<Point, 4> local{};
  for (std::size_t p = 0; p < 4; ++p) {
    local[p] = {corners[p].x - xs, corners[p].z - zs};
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    sum += edge_term(local[p], local[(p + 1) % 4]);
  }
  return sum;
}

}  // namespace

double edge_term(Point a, Point b) {
  const double ra = std::hypot(a.x, a.z);
  const double rb = std::hypot(b.x, b.z);
  if (ra == 0.0 || rb == 0.0) {
    throw GeometryError("polygon vertex coincides with the station (singular kernel)");
  }
  const double dtheta = fold_angle(std::atan2(b.z, b.x) - std::atan2(a.z, a.x));
  if (b.z == a.z) {
    return a.z * dtheta;
  }
  // nu/(1+psi^2) and psi*nu/(1+psi^2) rewritten over dx^2+dz^2 so the
  // near-horizontal case does not divide by a tiny dz.
  const double dx = b.x - a.x;
  const double dz = b.z - a.z;
  const double scale = (a.x * dz - a.z * dx) / (dx * dx + dz * dz);
  return scale * (dz * std::log(rb / ra) - dx * dtheta);
}

double polygon_gravity(const Polygon& poly, double density) {
  if (density == 0.0) return 0.0;
  const std::size_t n = poly.size();
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    sum += edge_term(poly[p], poly[(p + 1) % n]);
  }
  return kPolygonScale * density * sum;
}

SensitivityMatrix::SensitivityMatrix(SurveyGrid grid, StationSet stations, Matrix entries)
    : grid_(std::move(grid)), stations_(std::move(stations)), entries_(std::move(entries)) {
  if (entries_.rows() != static_cast<Eigen::Index>(stations_.size()) ||
      entries_.cols() != static_cast<Eigen::Index>(grid_.cell_count())) {
    throw DimensionError("sensitivity matrix shape does not match grid and stations");
  }
  if (!entries_.allFinite()) {
    throw NumericalError("sensitivity matrix has non-finite entries");
  }
}

SensitivityMatrix assemble_sensitivity(const SurveyGrid& grid, const StationSet& stations,
                                       unsigned threads) {
  validate_layout(grid, stations);
  const std::size_t m = stations.size();
  const std::size_t n = grid.cell_count();

  std::vector<std::array<Point, 4>> cells(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Polygon poly = cell_polygon(grid, j);
    std::copy(poly.vertices().begin(), poly.vertices().end(), cells[j].begin());
  }

  Matrix g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double xs = stations.x(i);
      for (std::size_t j = 0; j < n; ++j) {
        try {
          g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              kPolygonScale * cell_line_sum(cells[j], xs, stations.z_obs());
        } catch (const GeometryError& e) {
          throw GeometryError("station " + std::to_string(i) + ", cell " +
                              std::to_string(j) + ": " + e.what());
        }
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, std::max<std::size_t>(m, 1));
  if (workers == 1) {
    fill_rows(0, m);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (m + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(m, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          fill_rows(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return SensitivityMatrix(grid, stations, std::move(g));
}

GravityProfile forward_map(const SensitivityMatrix& g, const Vector& model) {
  if (static_cast<std::size_t>(model.size()) != g.cols()) {
    throw DimensionError("model has " + std::to_string(model.size()) +
                         " entries, sensitivity expects " + std::to_string(g.cols()));
  }
  return {g.stations(), g.matrix() * model};
}

}  // namespace gravinv

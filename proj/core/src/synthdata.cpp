#include "gravinv/synthdata.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/QR>

#include "gravinv/errors.hpp"

namespace gravinv {

Vector block_model(const SurveyGrid& grid, std::size_t col0, std::size_t col1,
                   std::size_t row0, std::size_t row1, double contrast) {
  if (col0 >= col1 || row0 >= row1 || col1 > grid.n_cols() || row1 > grid.n_rows()) {
    throw GeometryError("block must be a non-empty range inside the grid");
  }
  Vector m = Vector::Zero(static_cast<Eigen::Index>(grid.cell_count()));
  for (std::size_t r = row0; r < row1; ++r) {
    for (std::size_t c = col0; c < col1; ++c) {
      m[static_cast<Eigen::Index>(grid.index(r, c))] = contrast;
    }
  }
  return m;
}

SyntheticCase reference_case() {
  SurveyGrid grid(50, 10, 10.0);
  StationSet stations = StationSet::centered_over(grid);
  Vector model = block_model(grid, 20, 30, 2, 7);
  return {std::move(grid), std::move(stations), std::move(model)};
}

void NoiseSpec::validate() const {
  if (!(eta1 >= 0.0) || !(eta2 >= 0.0)) {
    throw ConfigError("noise levels eta1, eta2 must be non-negative");
  }
  if (eta1 == 0.0 && eta2 == 0.0) {
    throw ConfigError("noise requested with eta1 = eta2 = 0");
  }
}

Vector noise_sigmas(const Vector& d_exact, double eta1, double eta2) {
  const double norm = d_exact.norm();
  if (!(norm > 0.0)) {
    throw DomainError("noise sigmas undefined for all-zero exact data");
  }
  if (eta1 < 0.0 || eta2 < 0.0) {
    throw DomainError("noise levels must be non-negative");
  }
  return (eta1 * d_exact.array().abs() + eta2 * norm).matrix();
}

Vector add_noise(const Vector& d_exact, const Vector& sigmas, std::uint64_t seed) {
  if (sigmas.size() != d_exact.size()) {
    throw DimensionError("sigma vector length differs from data length");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out = d_exact;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] += sigmas[i] * normal(rng);
  }
  return out;
}

double chi_squared(const Vector& d_obs, const Vector& d_pred, const Vector& sigmas) {
  if (d_obs.size() != d_pred.size() || d_obs.size() != sigmas.size()) {
    throw DimensionError("chi-squared inputs differ in length");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d_obs.size(); ++i) {
    if (sigmas[i] == 0.0) {
      throw DomainError("zero sigma at station " + std::to_string(i));
    }
    const double r = (d_obs[i] - d_pred[i]) / sigmas[i];
    sum += r * r;
  }
  return sum;
}

double relative_error(const Vector& m_exact, const Vector& m_final) {
  if (m_exact.size() != m_final.size()) {
    throw DimensionError("models differ in length");
  }
  const double norm = m_exact.norm();
  if (!(norm > 0.0)) {
    throw DomainError("relative error undefined for a zero exact model");
  }
  return (m_exact - m_final).norm() / norm;
}

GravityProfile regional_residual(const GravityProfile& profile, std::size_t poly_order) {
  const std::size_t m = profile.size();
  if (m != profile.stations.size()) {
    throw DimensionError("profile values and stations differ in length");
  }
  if (poly_order >= m) {
    throw DomainError("polynomial order must be below the station count");
  }
  // Monomials in x mapped to [-1, 1] keep the Vandermonde matrix well scaled.
  const auto xs = profile.stations.x();
  const double lo = xs.front();
  const double hi = xs.back();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Matrix basis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(poly_order + 1));
  for (std::size_t i = 0; i < m; ++i) {
    const double t = (xs[i] - mid) / half;
    double p = 1.0;
    for (std::size_t k = 0; k <= poly_order; ++k) {
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p;
      p *= t;
    }
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(basis);
  if (qr.rank() < static_cast<Eigen::Index>(poly_order + 1)) {
    throw DomainError("polynomial fit is rank deficient");
  }
  const Vector coeffs = qr.solve(profile.values);
  return {profile.stations, profile.values - basis * coeffs};
}

GravityProfile upward_continue(const GravityProfile& profile, double dz,
                               const ContinuationOptions& options) {
  if (!(dz > 0.0) || !std::isfinite(dz)) {
    throw DomainError("continuation height must be positive");
  }
  if (profile.size() != profile.stations.size()) {
    throw DimensionError("profile values and stations differ in length");
  }
  const double h = profile.stations.uniform_spacing();
  if (h == 0.0) {
    throw GeometryError("upward continuation requires uniform station spacing");
  }
  const auto xs = profile.stations.x();
  const Vector& f = profile.values;
  const std::size_t m = profile.size();
  const double length = xs.back() - xs.front();
  const double pad = options.padding_lengths * length;
  constexpr double inv_pi = std::numbers::inv_pi;

  // Integral of (1/pi) dz/(t^2+dz^2) and of t times it, over [t0, t1].
  auto mass = [&](double t0, double t1) {
    return inv_pi * (std::atan(t1 / dz) - std::atan(t0 / dz));
  };
  auto moment = [&](double t0, double t1) {
    return 0.5 * dz * inv_pi * std::log((t1 * t1 + dz * dz) / (t0 * t0 + dz * dz));
  };

  Vector out(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double x = xs[i];
    double acc = 0.0;
    acc += f[0] * mass(xs.front() - pad - x, xs.front() - x);
    for (std::size_t s = 0; s + 1 < m; ++s) {
      const double a = xs[s];
      const double b = xs[s + 1];
      const double slope = (f[static_cast<Eigen::Index>(s + 1)] - f[static_cast<Eigen::Index>(s)]) / (b - a);
      const double t0 = a - x;
      const double t1 = b - x;
      acc += (f[static_cast<Eigen::Index>(s)] + slope * (x - a)) * mass(t0, t1) + slope * moment(t0, t1);
    }
    acc += f[static_cast<Eigen::Index>(m - 1)] * mass(xs.back() - x, xs.back() + pad - x);
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  return {StationSet(std::vector<double>(xs.begin(), xs.end()), profile.stations.z_obs() - dz),
          std::move(out)};
}

}  // namespace gravinv

#pragma once

#include <cstddef>
#include <cstdint>

#include "gravinv/forward.hpp"

namespace gravinv {

/// Rectangular block of cells [col0, col1) x [row0, row1) at `contrast`,
/// zero elsewhere. Throws GeometryError if the block is empty or off-grid.
Vector block_model(const SurveyGrid& grid, std::size_t col0, std::size_t col1,
                   std::size_t row0, std::size_t row1, double contrast = 1.0);

/// The reference synthetic: 50 stations at 10 m spacing over a 50 x 10 grid of
/// 10 m cells, with a unit-contrast block 100 m wide and 50 m tall whose top
/// lies 20 m below the profile (columns 20 to 29, rows 2 to 6).
struct SyntheticCase {
  SurveyGrid grid;
  StationSet stations;
  Vector model;
};
SyntheticCase reference_case();

/// Relative noise model sigma_i = eta1*|d_i| + eta2*||d||_2.
struct NoiseSpec {
  double eta1 = 0.03;
  double eta2 = 0.001;
  std::uint64_t seed = 0;

  /// Throws ConfigError for negative levels or, when noise is requested,
  /// both levels zero.
  void validate() const;
};

/// Per-station relative standard deviations (mGal).
Vector noise_sigmas(const Vector& d_exact, double eta1, double eta2);

/// d_exact + e with e_i ~ N(0, sigma_i^2) from a seeded 64-bit Mersenne
/// twister. The same seed always yields the same realization.
Vector add_noise(const Vector& d_exact, const Vector& sigmas, std::uint64_t seed);

/// sum_i ((d_obs_i - d_pred_i) / sigma_i)^2.
double chi_squared(const Vector& d_obs, const Vector& d_pred, const Vector& sigmas);

/// ||m_exact - m_final||_2 / ||m_exact||_2.
double relative_error(const Vector& m_exact, const Vector& m_final);

/// Removes a least-squares polynomial trend of the given order in x.
GravityProfile regional_residual(const GravityProfile& profile, std::size_t poly_order = 1);

/// Options for upward continuation.
struct ContinuationOptions {
  /// Constant edge-value padding on each side, in multiples of the profile length.
  double padding_lengths = 3.0;
};

/// Continues a uniformly sampled profile upward by dz > 0 metres.
///
/// The profile is treated as piecewise linear between stations (trapezoid
/// rule) and padded with its edge values; each output is the exact integral
/// of that function against the half-plane Poisson kernel
/// (1/pi) * dz / (x^2 + dz^2). The returned stations sit dz higher
/// (z_obs - dz). Throws GeometryError for non-uniform spacing.
GravityProfile upward_continue(const GravityProfile& profile, double dz,
                               const ContinuationOptions& options = {});

}  // namespace gravinv

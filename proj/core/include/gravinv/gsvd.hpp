#pragma once

#include <optional>

#include "gravinv/weights.hpp"

namespace gravinv {

/// Generalized SVD of the pair (Gt, D), Gt m x n with m < n and D p x n with
/// p >= n:
///
///   Gt = U Lambda X^T,   D = V M X^T,
///
/// with U (m x m) orthogonal, V (p x n) with orthonormal columns and X
/// nonsingular. Generalized index
/// i runs over 0..n-1; the first q = n - m entries have lambda = 0, mu = 1,
/// gamma = 0 and the remaining gamma = lambda/mu are nondecreasing. Column k
/// of U pairs with generalized index q + k. lambda^2 + mu^2 = 1 for every i.
struct GsvdFactors {
  Matrix u;
  Vector gamma;
  Vector lambda;
  Vector mu;
  /// Columns of (X^T)^{-1}.
  Matrix xinv;
  /// X^T itself, kept so both identities can be checked without an inverse.
  Matrix xt;
  std::optional<Matrix> v;
  Eigen::Index q = 0;

  Eigen::Index m() const { return u.rows(); }
  Eigen::Index n() const { return gamma.size(); }
  /// The m generalized singular values paired with the columns of U.
  auto active_gamma() const { return gamma.tail(m()); }
};

struct GsvdOptions {
  bool compute_v = true;
  /// Use the stacked QR / cosine-sine route even for a diagonal D.
  bool force_general = false;
};

/// Factorizes (Gt, D).
///
/// A positive diagonal D is reduced to the ordinary SVD of Gt * D^{-1}
/// (gamma are its singular values, X^{-1 T} = D^{-1} W M). A general D goes
/// through a column-pivoted QR of the stacked, max-scaled pair followed by an
/// SVD of the upper block. Throws DomainError if N(Gt) and N(D) intersect,
/// DimensionError for m >= n or mismatched sizes, NumericalError for
/// non-finite input.
GsvdFactors gsvd_factorize(const Matrix& gt, const StabilizerOperator& d,
                           const GsvdOptions& options = {});

/// f_i = gamma_i^2 / (gamma_i^2 + alpha^2) for i >= q, zero below.
Vector filter_factors(const Vector& gamma, Eigen::Index q, double alpha);
inline Vector filter_factors(const GsvdFactors& f, double alpha) {
  return filter_factors(f.gamma, f.q, alpha);
}

/// U^T r.
Vector spectral_coefficients(const GsvdFactors& factors, const Vector& r);

/// Filtered Tikhonov solution sum_i f_i (u_{i-q}^T r / lambda_i) (X^T)^{-1}_i,
/// i.e. the minimizer of ||Gt x - r||^2 + alpha^2 ||D x||^2.
Vector solve_filtered(const GsvdFactors& factors, const Vector& r, double alpha);

/// Residual norm ||Gt x(alpha) - r|| and seminorm ||D x(alpha)|| evaluated
/// from the spectral coefficients without forming x.
struct FilteredNorms {
  double residual = 0.0;
  double seminorm = 0.0;
};
FilteredNorms filtered_norms(const GsvdFactors& factors, const Vector& coeffs, double alpha);

}  // namespace gravinv

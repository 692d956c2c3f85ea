#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/SparseCore>

#include "gravinv/geometry.hpp"

namespace gravinv {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Weight assigned to hard-constrained cells.
inline constexpr double kHardConstraintWeight = 100.0;

/// Diagonal weights. wd has one entry per station, the rest one per cell.
struct WeightSet {
  Vector wd;
  Vector we;
  Vector wdepth;
  Vector whard;
};

enum class StabilizerKind { minimum_support, smoothness };

/// The operator D in alpha^2 ||D (m - m_apr)||^2.
///
/// The minimum-support kind is the diagonal product We * Whard * Wdepth. The
/// smoothness kind is a sparse second-difference operator L applied after the
/// Whard * Wdepth scaling, D = L * Whard * Wdepth.
class StabilizerOperator {
 public:
  static StabilizerOperator diagonal(Vector entries);
  static StabilizerOperator general(SparseMatrix matrix);

  StabilizerKind kind() const { return kind_; }
  bool is_diagonal() const { return kind_ == StabilizerKind::minimum_support; }
  Eigen::Index size() const;

  /// Diagonal entries; only valid for the diagonal kind.
  const Vector& diagonal_entries() const;
  const SparseMatrix& sparse() const;

  Vector apply(const Vector& x) const;
  Matrix dense() const;

  /// max/min of the diagonal (diagonal kind only).
  double condition_number() const;

 private:
  StabilizerKind kind_ = StabilizerKind::minimum_support;
  Vector diag_;
  SparseMatrix sparse_;
};

/// 1/sigma elementwise. Throws DomainError on a non-positive sigma.
Vector data_weights(const Vector& sigmas);

/// 1 / (z_j + zeta)^beta with z_j the depth of the centre of cell j.
Vector depth_weights(const SurveyGrid& grid, double beta, double zeta);

/// Minimum-support weights ((m_curr - m_prev)^2 + eps^2)^(-1/2). With no
/// previous pair (first iteration) the result is all ones of length n.
Vector ms_weights(const Vector& m_curr, const Vector& m_prev, double epsilon);
Vector ms_weights_initial(std::size_t n);

/// Sets entry j to the hard-constraint weight. Idempotent.
Vector hard_constrain(Vector whard, std::size_t j);

/// Elementwise product we * whard * wdepth as a diagonal operator.
StabilizerOperator compose_D(const Vector& we, const Vector& whard, const Vector& wdepth);

/// Horizontal and vertical 1-D second differences on the grid, stacked as a
/// 2n x n operator [Lx; Lz] so that ||L m||^2 is the sum of both squared
/// penalties. Stencil (1, -2, 1) in cell units, one-sided on the borders. A
/// grid direction with fewer than three cells contributes zero rows.
SparseMatrix second_difference(const SurveyGrid& grid);

/// Smoothness stabilizer [L; delta I] * diag(whard * wdepth), a 3n x n
/// operator. delta = 1e-6 * ||L||_inf gives D full column rank, so N(G) and
/// N(D) cannot intersect.
StabilizerOperator smoothness_operator(const SurveyGrid& grid, const Vector& whard,
                                       const Vector& wdepth);

}  // namespace gravinv

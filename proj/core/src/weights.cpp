#include "gravinv/weights.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gravinv/errors.hpp"

namespace gravinv {

StabilizerOperator StabilizerOperator::diagonal(Vector entries) {
  for (Eigen::Index j = 0; j < entries.size(); ++j) {
    if (!(entries[j] > 0.0) || !std::isfinite(entries[j])) {
      throw DomainError("diagonal stabilizer entry " + std::to_string(j) +
                        " is not positive and finite");
    }
  }
  StabilizerOperator op;
  op.kind_ = StabilizerKind::minimum_support;
  op.diag_ = std::move(entries);
  return op;
}

StabilizerOperator StabilizerOperator::general(SparseMatrix matrix) {
  if (matrix.rows() < matrix.cols()) {
    throw DimensionError("stabilizer needs at least as many rows as columns");
  }
  StabilizerOperator op;
  op.kind_ = StabilizerKind::smoothness;
  op.sparse_ = std::move(matrix);
  op.sparse_.makeCompressed();
  return op;
}

Eigen::Index StabilizerOperator::size() const {
  return is_diagonal() ? diag_.size() : sparse_.cols();
}

const Vector& StabilizerOperator::diagonal_entries() const {
  if (!is_diagonal()) throw DomainError("stabilizer is not diagonal");
  return diag_;
}

const SparseMatrix& StabilizerOperator::sparse() const {
  if (is_diagonal()) throw DomainError("stabilizer is diagonal");
  return sparse_;
}

Vector StabilizerOperator::apply(const Vector& x) const {
  if (x.size() != size()) throw DimensionError("stabilizer applied to wrong-length vector");
  if (is_diagonal()) return (diag_.array() * x.array()).matrix();
  return sparse_ * x;
}

Matrix StabilizerOperator::dense() const {
  if (is_diagonal()) return diag_.asDiagonal();
  return Matrix(sparse_);
}

double StabilizerOperator::condition_number() const {
  const Vector& d = diagonal_entries();
  return d.maxCoeff() / d.minCoeff();
}

Vector data_weights(const Vector& sigmas) {
  for (Eigen::Index i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0)) {
      throw DomainError("sigma " + std::to_string(i) + " is not positive");
    }
  }
  return sigmas.cwiseInverse();
}

Vector depth_weights(const SurveyGrid& grid, double beta, double zeta) {
  if (!(beta >= 0.0)) throw DomainError("depth exponent beta must be >= 0");
  if (!(zeta > 0.0)) throw DomainError("depth offset zeta must be > 0");
  Vector w(static_cast<Eigen::Index>(grid.cell_count()));
  for (std::size_t j = 0; j < grid.cell_count(); ++j) {
    w[static_cast<Eigen::Index>(j)] = std::pow(grid.cell_center(j).z + zeta, -beta);
  }
  return w;
}

Vector ms_weights(const Vector& m_curr, const Vector& m_prev, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("focusing parameter epsilon must be > 0");
  if (m_curr.size() != m_prev.size()) throw DimensionError("model lengths differ");
  const auto diff = (m_curr - m_prev).array();
  return (diff.square() + epsilon * epsilon).rsqrt().matrix();
}

Vector ms_weights_initial(std::size_t n) {
  return Vector::Ones(static_cast<Eigen::Index>(n));
}

Vector hard_constrain(Vector whard, std::size_t j) {
  if (j >= static_cast<std::size_t>(whard.size())) {
    throw DomainError("hard-constraint index " + std::to_string(j) + " out of range");
  }
  whard[static_cast<Eigen::Index>(j)] = kHardConstraintWeight;
  return whard;
}

StabilizerOperator compose_D(const Vector& we, const Vector& whard, const Vector& wdepth) {
  if (we.size() != whard.size() || we.size() != wdepth.size()) {
    throw DimensionError("weight vectors differ in length");
  }
  return StabilizerOperator::diagonal((we.array() * whard.array() * wdepth.array()).matrix());
}

SparseMatrix second_difference(const SurveyGrid& grid) {
  const std::size_t nc = grid.n_cols();
  const std::size_t nr = grid.n_rows();
  const std::size_t n = grid.cell_count();
  if (n < 3 || (nc < 3 && nr < 3)) {
    throw DomainError("grid too small for a second-difference operator");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(6 * n);
  // Stencil start for a line of `len` cells at position p.
  auto start = [](std::size_t p, std::size_t len) -> std::size_t {
    if (p == 0) return 0;
    if (p + 1 == len) return len - 3;
    return p - 1;
  };
  auto stencil = [&](int row, std::size_t a, std::size_t b, std::size_t c) {
    triplets.emplace_back(row, static_cast<int>(a), 1.0);
    triplets.emplace_back(row, static_cast<int>(b), -2.0);
    triplets.emplace_back(row, static_cast<int>(c), 1.0);
  };
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const auto j = static_cast<int>(grid.index(r, c));
      if (nc >= 3) {
        const std::size_t s = start(c, nc);
        stencil(j, grid.index(r, s), grid.index(r, s + 1), grid.index(r, s + 2));
      }
      if (nr >= 3) {
        const std::size_t s = start(r, nr);
        stencil(j + static_cast<int>(n), grid.index(s, c), grid.index(s + 1, c),
                grid.index(s + 2, c));
      }
    }
  }
  SparseMatrix l(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(n));
  l.setFromTriplets(triplets.begin(), triplets.end());
  l.prune(0.0);
  return l;
}

StabilizerOperator smoothness_operator(const SurveyGrid& grid, const Vector& whard,
                                       const Vector& wdepth) {
  const auto n = static_cast<Eigen::Index>(grid.cell_count());
  if (whard.size() != n || wdepth.size() != n) {
    throw DimensionError("weight vectors do not match the grid");
  }
  const SparseMatrix l = second_difference(grid);
  Vector row_sums = Vector::Zero(l.rows());
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) row_sums[it.row()] += std::abs(it.value());
  }
  const double shift = 1e-6 * row_sums.maxCoeff();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(l.nonZeros() + n));
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) {
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    triplets.emplace_back(static_cast<int>(l.rows() + j), static_cast<int>(j), shift);
  }
  SparseMatrix augmented(l.rows() + n, n);
  augmented.setFromTriplets(triplets.begin(), triplets.end());
  const Vector scale = (whard.array() * wdepth.array()).matrix();
  SparseMatrix d = augmented * scale.asDiagonal();
  return StabilizerOperator::general(std::move(d));
}

}  // namespace gravinv

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "gravinv/errors.hpp"
#include "gravinv/weights.hpp"

using namespace gravinv;

TEST(DataWeights, Reciprocal) {
  EXPECT_TRUE(data_weights(Vector::Ones(4)).isOnes(0.0));
  const Vector s = (Vector(3) << 0.07, 0.5, 2.0).finished();
  const Vector w = data_weights(s);
  EXPECT_NEAR(w[0], 14.2857142857, 1e-9);
  const Vector sp = (Vector(3) << 2.0, 0.07, 0.5).finished();
  const Vector wp = data_weights(sp);
  EXPECT_EQ(wp[0], w[2]);
  EXPECT_EQ(wp[1], w[0]);
  EXPECT_THROW(data_weights((Vector(2) << 1.0, 0.0).finished()), DomainError);
}

TEST(DepthWeights, FormulaAndMonotonicity) {
  const SurveyGrid grid(3, 2, 10.0);
  EXPECT_TRUE(depth_weights(grid, 0.0, 0.1).isOnes(0.0));
  const Vector w = depth_weights(grid, 0.6, 0.1);
  EXPECT_NEAR(w[0] / w[3], std::pow(15.1 / 5.1, 0.6), 1e-13);
  EXPECT_NEAR(w[0], 1.0 / std::pow(5.1, 0.6), 1e-15);
  const Vector deep = depth_weights(SurveyGrid(2, 10, 5.0), 0.6, 0.1);
  for (Eigen::Index j = 2; j < deep.size(); ++j) EXPECT_LT(deep[j], deep[j - 2]);
  EXPECT_THROW(depth_weights(grid, -0.1, 0.1), DomainError);
  EXPECT_THROW(depth_weights(grid, 0.6, 0.0), DomainError);
}

TEST(MsWeights, Formula) {
  const Vector m = (Vector(3) << 0.3, 0.5, 0.9).finished();
  EXPECT_TRUE((ms_weights(m, m, 0.02).array() == 50.0).all());
  const Vector shifted = (m.array() + 0.02).matrix();
  const Vector w = ms_weights(shifted, m, 0.02);
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(w[j], 1.0 / (0.02 * std::sqrt(2.0)), 1e-9);
  EXPECT_TRUE(ms_weights_initial(5).isOnes(0.0));
  EXPECT_THROW(ms_weights(m, m, 0.0), DomainError);
  EXPECT_THROW(ms_weights(m, Vector::Zero(2), 0.02), DimensionError);
}

TEST(MsWeights, BoundedByInverseEpsilonAndFlatForLargeEpsilon) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  Vector a(100), b(100);
  for (int j = 0; j < 100; ++j) {
    a[j] = n(rng);
    b[j] = n(rng);
  }
  for (double eps : {1e-3, 0.02, 1.0}) {
    EXPECT_LE(ms_weights(a, b, eps).maxCoeff(), 1.0 / eps);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 1.0, 10.0, 100.0}) {
    const Vector w = ms_weights(a, b, eps);
    const double ratio = w.maxCoeff() / w.minCoeff();
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_LT(prev, 1.001);
}

TEST(HardConstrain, SetsOneEntryIdempotently) {
  const Vector w = hard_constrain(Vector::Ones(6), 3);
  EXPECT_EQ(w[3], 100.0);
  EXPECT_EQ(w.sum(), 105.0);
  EXPECT_TRUE((hard_constrain(w, 3).array() == w.array()).all());
  EXPECT_THROW(hard_constrain(w, 6), DomainError);
}

TEST(ComposeD, ElementwiseProduct) {
  const Vector ones = Vector::Ones(4);
  EXPECT_TRUE(compose_D(ones, ones, ones).diagonal_entries().isOnes(0.0));
  const Vector a = (Vector(4) << 1, 2, 3, 4).finished();
  const Vector b = (Vector(4) << 0.5, 1, 100, 1).finished();
  const Vector c = (Vector(4) << 0.3, 0.2, 0.1, 0.05).finished();
  const Vector d1 = compose_D(a, b, c).diagonal_entries();
  EXPECT_LE((d1 - compose_D(c, a, b).diagonal_entries()).cwiseAbs().maxCoeff(), 1e-14 * d1.cwiseAbs().maxCoeff());
  EXPECT_TRUE((d1.array() > 0.0).all());
  const SurveyGrid grid(2, 2, 1.0);
  const Vector whard = hard_constrain(ones, 1);
  EXPECT_TRUE((compose_D(ms_weights_initial(4), whard, depth_weights(grid, 0.0, 0.1))
                   .diagonal_entries()
                   .array() == whard.array())
                  .all());
  EXPECT_THROW(compose_D(a, b, Vector::Ones(3)), DimensionError);
}

TEST(StabilizerOperator, DiagonalConditionNumberAndErrors) {
  const auto d = StabilizerOperator::diagonal((Vector(3) << 2.0, 8.0, 0.5).finished());
  EXPECT_DOUBLE_EQ(d.condition_number(), 16.0);
  EXPECT_TRUE((d.apply(Vector::Ones(3)).array() == d.diagonal_entries().array()).all());
  EXPECT_THROW(StabilizerOperator::diagonal((Vector(2) << 1.0, 0.0).finished()), DomainError);
  EXPECT_THROW(d.apply(Vector::Ones(2)), DimensionError);
}

TEST(SecondDifference, AnnihilatesConstantsAndLinearRamps) {
  const SurveyGrid grid(7, 5, 1.0);
  const SparseMatrix l = second_difference(grid);
  const auto n = static_cast<Eigen::Index>(grid.cell_count());
  ASSERT_EQ(l.rows(), 2 * n);
  EXPECT_LE((l * Vector::Ones(n)).cwiseAbs().maxCoeff(), 1e-14);
  Vector ramp_x(n), ramp_z(n), quad_x(n);
  for (std::size_t j = 0; j < grid.cell_count(); ++j) {
    const double c = static_cast<double>(grid.col_of(j));
    const double r = static_cast<double>(grid.row_of(j));
    ramp_x[static_cast<Eigen::Index>(j)] = 3.0 * c - 1.0;
    ramp_z[static_cast<Eigen::Index>(j)] = -2.0 * r;
    quad_x[static_cast<Eigen::Index>(j)] = c * c;
  }
  EXPECT_LE((l * ramp_x).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((l * ramp_z).cwiseAbs().maxCoeff(), 1e-13);
  const Vector lq = l * quad_x;
  for (Eigen::Index j = 0; j < n; ++j) {
    EXPECT_NEAR(lq[j], 2.0, 1e-13);       // horizontal rows
    EXPECT_NEAR(lq[n + j], 0.0, 1e-13);   // vertical rows
  }
}

TEST(SecondDifference, ShortDirectionContributesNothing) {
  const SurveyGrid grid(5, 2, 1.0);
  const SparseMatrix l = second_difference(grid);
  EXPECT_EQ(Matrix(l).bottomRows(10).cwiseAbs().sum(), 0.0);
  EXPECT_THROW(second_difference(SurveyGrid(2, 2, 1.0)), DomainError);
}

TEST(SmoothnessOperator, FullColumnRankWithSmallShift) {
  const SurveyGrid grid(8, 4, 1.0);
  const auto n = static_cast<Eigen::Index>(grid.cell_count());
  const StabilizerOperator d = smoothness_operator(grid, Vector::Ones(n), Vector::Ones(n));
  EXPECT_FALSE(d.is_diagonal());
  EXPECT_EQ(d.size(), n);
  const Matrix dm = d.dense();
  EXPECT_EQ(dm.rows(), 3 * n);
  Eigen::JacobiSVD<Matrix> svd(dm);
  EXPECT_GT(svd.singularValues().minCoeff(), 0.0);
  // The constant vector only sees the shift: ||D 1|| = 1e-6 * 4 * sqrt(n).
  EXPECT_NEAR(d.apply(Vector::Ones(n)).norm(), 4e-6 * std::sqrt(static_cast<double>(n)), 1e-15);
}

TEST(SmoothnessOperator, AppliesWeightsBeforeTheStencil) {
  const SurveyGrid grid(5, 3, 2.0);
  const auto n = static_cast<Eigen::Index>(grid.cell_count());
  const Vector whard = hard_constrain(Vector::Ones(n), 4);
  const Vector wdepth = depth_weights(grid, 0.6, 0.1);
  const StabilizerOperator d = smoothness_operator(grid, whard, wdepth);
  const Matrix plain = smoothness_operator(grid, Vector::Ones(n), Vector::Ones(n)).dense();
  const Matrix expected = plain * (whard.array() * wdepth.array()).matrix().asDiagonal();
  EXPECT_LE((d.dense() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

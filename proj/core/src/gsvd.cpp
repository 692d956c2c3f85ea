#include "gravinv/gsvd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "gravinv/errors.hpp"

namespace gravinv {

namespace {

void check_inputs(const Matrix& gt, const StabilizerOperator& d) {
  if (gt.rows() >= gt.cols()) {
    throw DimensionError("GSVD requires fewer rows than columns (m=" +
                         std::to_string(gt.rows()) + ", n=" + std::to_string(gt.cols()) + ")");
  }
  if (d.size() != gt.cols()) {
    throw DimensionError("stabilizer size does not match the kernel");
  }
  if (!gt.allFinite()) {
    throw NumericalError("weighted kernel has non-finite entries");
  }
}

// Stable-sorts the m active positions by gamma in case rounding broke ties.
void enforce_ordering(GsvdFactors& f) {
  const Eigen::Index m = f.m();
  const Eigen::Index q = f.q;
  bool sorted = true;
  for (Eigen::Index k = 1; k < m; ++k) {
    if (f.gamma[q + k] < f.gamma[q + k - 1]) sorted = false;
  }
  if (sorted) return;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return f.gamma[q + a] < f.gamma[q + b];
  });
  GsvdFactors g = f;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    g.u.col(k) = f.u.col(src);
    g.gamma[q + k] = f.gamma[q + src];
    g.lambda[q + k] = f.lambda[q + src];
    g.mu[q + k] = f.mu[q + src];
    g.xinv.col(q + k) = f.xinv.col(q + src);
    g.xt.row(q + k) = f.xt.row(q + src);
    if (f.v) g.v->col(q + k) = f.v->col(q + src);
  }
  f = std::move(g);
}

GsvdFactors factorize_diagonal(const Matrix& gt, const Vector& dvec, bool compute_v) {
  const Eigen::Index m = gt.rows();
  const Eigen::Index n = gt.cols();
  const Eigen::Index q = n - m;
  const Vector dinv = dvec.cwiseInverse();
  const Matrix a = gt * dinv.asDiagonal();

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const Matrix& uu = svd.matrixU();
  const Matrix& ww = svd.matrixV();

  GsvdFactors f;
  f.q = q;
  f.u.resize(m, m);
  f.gamma = Vector::Zero(n);
  f.lambda = Vector::Zero(n);
  f.mu = Vector::Ones(n);
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < q; ++i) w.col(i) = ww.col(m + i);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index src = m - 1 - k;
    const double g = sigma[src];
    const double t = std::hypot(1.0, g);
    f.u.col(k) = uu.col(src);
    w.col(q + k) = ww.col(src);
    f.gamma[q + k] = g;
    f.lambda[q + k] = g / t;
    f.mu[q + k] = 1.0 / t;
  }
  // X^T = M^{-1} W^T D and (X^T)^{-1} = D^{-1} W M.
  f.xt = f.mu.cwiseInverse().asDiagonal() * w.transpose() * dvec.asDiagonal();
  f.xinv = dinv.asDiagonal() * w * f.mu.asDiagonal();
  if (compute_v) f.v = std::move(w);
  return f;
}

GsvdFactors factorize_general(const Matrix& gt, const Matrix& dmat, bool compute_v) {
  const Eigen::Index m = gt.rows();
  const Eigen::Index n = gt.cols();
  const Eigen::Index p = dmat.rows();
  const Eigen::Index q = n - m;
  if (!dmat.allFinite()) throw NumericalError("stabilizer has non-finite entries");

  const double a = gt.cwiseAbs().maxCoeff();
  const double b = dmat.cwiseAbs().maxCoeff();
  if (!(b > 0.0)) throw DomainError("stabilizer is identically zero");
  const double a_eff = a > 0.0 ? a : 1.0;

  Matrix stacked(m + p, n);
  stacked.topRows(m) = gt / a_eff;
  stacked.bottomRows(p) = dmat / b;
  Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
  if (qr.rank() < n) {
    throw DomainError("null spaces of the kernel and the stabilizer intersect");
  }
  const Matrix qthin = qr.householderQ() * Matrix::Identity(m + p, n);
  const Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const auto& perm = qr.colsPermutation();

  Eigen::JacobiSVD<Matrix> svd(qthin.topRows(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& cvals = svd.singularValues();
  const Matrix& uu = svd.matrixU();
  const Matrix& zz = svd.matrixV();

  GsvdFactors f;
  f.q = q;
  f.u.resize(m, m);
  f.gamma = Vector::Zero(n);
  f.lambda = Vector::Zero(n);
  f.mu = Vector::Ones(n);
  Matrix z(n, n);
  Vector c = Vector::Zero(n);
  for (Eigen::Index i = 0; i < q; ++i) z.col(i) = zz.col(m + i);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index src = m - 1 - k;
    f.u.col(k) = uu.col(src);
    z.col(q + k) = zz.col(src);
    c[q + k] = cvals[src];
  }
  Matrix t = qthin.bottomRows(p) * z;
  Vector scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = t.col(i).norm();
    if (!(s > 0.0)) {
      throw DomainError("stabilizer is singular along a data direction");
    }
    t.col(i) /= s;
    const double ci = i < q ? 0.0 : c[i];
    const double len = std::hypot(a_eff * ci, b * s);
    f.lambda[i] = a_eff * ci / len;
    f.mu[i] = b * s / len;
    f.gamma[i] = i < q ? 0.0 : f.lambda[i] / f.mu[i];
    scale[i] = len;
  }
  // Scaled pair: Gt/a = Q1 R P^T = U C Z^T R P^T, so X^T = diag(len) Z^T R P^T.
  const Matrix zr = z.transpose() * r;
  f.xt = scale.asDiagonal() * zr * perm.transpose();
  Matrix rinv_z = r.triangularView<Eigen::Upper>().solve(z);
  rinv_z = rinv_z * scale.cwiseInverse().asDiagonal();
  f.xinv = perm * rinv_z;
  if (compute_v) f.v = std::move(t);
  return f;
}

}  // namespace

GsvdFactors gsvd_factorize(const Matrix& gt, const StabilizerOperator& d,
                           const GsvdOptions& options) {
  check_inputs(gt, d);
  GsvdFactors f = (d.is_diagonal() && !options.force_general)
                      ? factorize_diagonal(gt, d.diagonal_entries(), options.compute_v)
                      : factorize_general(gt, d.dense(), options.compute_v);
  if (!f.xinv.allFinite() || !f.gamma.allFinite()) {
    throw NumericalError("GSVD produced non-finite factors");
  }
  enforce_ordering(f);
  return f;
}

Vector filter_factors(const Vector& gamma, Eigen::Index q, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("regularization parameter must be positive");
  Vector f = Vector::Zero(gamma.size());
  const double a2 = alpha * alpha;
  for (Eigen::Index i = q; i < gamma.size(); ++i) {
    const double g2 = gamma[i] * gamma[i];
    f[i] = g2 / (g2 + a2);
  }
  return f;
}

Vector spectral_coefficients(const GsvdFactors& factors, const Vector& r) {
  if (r.size() != factors.m()) throw DimensionError("residual length does not match GSVD");
  return factors.u.transpose() * r;
}

Vector solve_filtered(const GsvdFactors& factors, const Vector& r, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("regularization parameter must be positive");
  const Vector coeffs = spectral_coefficients(factors, r);
  const Eigen::Index m = factors.m();
  const Eigen::Index q = factors.q;
  const double a2 = alpha * alpha;
  Vector w(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double g = factors.gamma[q + k];
    // f/lambda written as gamma / (mu (gamma^2 + alpha^2)) so gamma = 0 is harmless.
    w[k] = g == 0.0 ? 0.0 : coeffs[k] * g / (factors.mu[q + k] * (g * g + a2));
  }
  return factors.xinv.rightCols(m) * w;
}

FilteredNorms filtered_norms(const GsvdFactors& factors, const Vector& coeffs, double alpha) {
  const Eigen::Index m = factors.m();
  const Eigen::Index q = factors.q;
  const double a2 = alpha * alpha;
  double res2 = 0.0;
  double semi2 = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double g = factors.gamma[q + k];
    const double g2 = g * g;
    const double one_minus_f = a2 / (g2 + a2);
    res2 += (one_minus_f * coeffs[k]) * (one_minus_f * coeffs[k]);
    if (g != 0.0) {
      const double s = g / (g2 + a2) * coeffs[k];
      semi2 += s * s;
    }
  }
  return {std::sqrt(res2), std::sqrt(semi2)};
}

}  // namespace gravinv

#include "glrr/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glrr {

namespace {

constexpr double kLogSingularTol = 1e-10;

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::Shape, std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                                      std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                      std::to_string(b.cols()) + ")");
  }
}

double stiefel_residual(const Matrix& m) {
  return (m.transpose() * m - Matrix::Identity(m.cols(), m.cols())).norm();
}

// Largest-magnitude entry of every column made positive.
void fix_column_signs(Matrix& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < 0.0) u.col(j) = -u.col(j);
  }
}

}  // namespace

GrassmannPoint GrassmannPoint::validate(Matrix basis, double tol) {
  if (basis.cols() == 0 || basis.rows() == 0) throw Error(ErrorKind::Shape, "empty basis");
  if (basis.cols() > basis.rows()) {
    throw Error(ErrorKind::Shape, "subspace dimension " + std::to_string(basis.cols()) + " exceeds ambient dimension " +
                                      std::to_string(basis.rows()));
  }
  if (!basis.allFinite()) throw Error(ErrorKind::NotOrthonormal, "basis has non-finite entries");
  const double residual = stiefel_residual(basis);
  if (!(residual <= tol)) {
    throw Error(ErrorKind::NotOrthonormal, "||M^T M - I||_F = " + std::to_string(residual) + " exceeds tolerance");
  }
  return GrassmannPoint(std::make_shared<const Matrix>(std::move(basis)));
}

Matrix GrassmannPoint::projector() const { return (*basis_) * basis_->transpose(); }

GrassmannPoint GrassmannPoint::right_act(const Matrix& q) const {
  if (q.rows() != subspace_dim() || q.cols() != subspace_dim()) throw Error(ErrorKind::Shape, "right_act: q must be p x p");
  return validate((*basis_) * q, 1e-9);
}

bool GrassmannPoint::same_representative(const GrassmannPoint& other) const {
  if (basis_ == other.basis_) return true;
  if (basis_->rows() != other.basis_->rows() || basis_->cols() != other.basis_->cols()) return false;
  return (*basis_ - *other.basis_).cwiseAbs().maxCoeff() <= 1e-12;
}

TangentVector::TangentVector(GrassmannPoint base, Matrix h, double tol) : base_(std::move(base)), h_(std::move(h)) {
  check_same_shape(base_.basis(), h_, "TangentVector");
  const double residual = (base_.basis().transpose() * h_).norm();
  if (!(residual <= tol)) {
    throw Error(ErrorKind::BaseMismatch, "X^T H residual " + std::to_string(residual) + " violates horizontality");
  }
}

TangentVector TangentVector::zero(const GrassmannPoint& base) {
  return TangentVector(base, Matrix::Zero(base.ambient_dim(), base.subspace_dim()));
}

GrassmannPoint validate_stiefel(const Matrix& m, double tol) { return GrassmannPoint::validate(m, tol); }

GrassmannPoint from_samples(const Matrix& samples, Eigen::Index p) {
  if (samples.cols() < 1 || samples.rows() < 1) throw Error(ErrorKind::Shape, "from_samples: empty sample matrix");
  if (p < 1 || p > std::min(samples.rows(), samples.cols())) {
    throw Error(ErrorKind::Shape, "from_samples: p = " + std::to_string(p) + " not in [1, min(d, M)]");
  }
  Eigen::BDCSVD<Matrix> svd(samples, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double floor = 1e-12 * sigma_max;
  const auto nonzero = (sigma.array() > floor).count();
  if (sigma_max <= 0.0 || nonzero < p) {
    throw Error(ErrorKind::RankDeficient, "from_samples: only " + std::to_string(nonzero) +
                                              " nonzero singular values, need " + std::to_string(p));
  }
  Matrix basis = svd.matrixU().leftCols(p);
  fix_column_signs(basis);
  // The SVD factor is orthonormal to rounding; polish so validation holds at 1e-10 for any d.
  if (stiefel_residual(basis) > 1e-12) basis = orthonormalize(basis);
  return GrassmannPoint::validate(std::move(basis));
}

Matrix log_map_matrix(const Matrix& x, const Matrix& y) {
  check_same_shape(x, y, "log_map");
  const Matrix xty = x.transpose() * y;
  Eigen::JacobiSVD<Matrix> small(xty);
  const double smin = small.singularValues().minCoeff();
  if (!(smin >= kLogSingularTol)) {
    throw Error(ErrorKind::LogUndefined,
                "X^T Y is singular (smallest singular value " + std::to_string(smin) + "), pair is at the cut locus");
  }
  Matrix residual = y - x * xty;
  // M = residual * (X^T Y)^{-1}, solved from the transposed system.
  Matrix m = xty.transpose().partialPivLu().solve(residual.transpose()).transpose();
  m.noalias() -= x * (x.transpose() * m);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector angles = svd.singularValues().array().atan().matrix();
  Matrix h = svd.matrixU() * angles.asDiagonal() * svd.matrixV().transpose();
  h.noalias() -= x * (x.transpose() * h);
  return h;
}

TangentVector log_map(const GrassmannPoint& x, const GrassmannPoint& y) {
  if (x.subspace_dim() != y.subspace_dim() || x.ambient_dim() != y.ambient_dim()) {
    throw Error(ErrorKind::Shape, "log_map: points live on different Grassmannians");
  }
  return TangentVector(TangentVector::Unchecked{}, x, log_map_matrix(x.basis(), y.basis()));
}

GrassmannPoint exp_map(const GrassmannPoint& x, const TangentVector& h) {
  check_same_shape(x.basis(), h.matrix(), "exp_map");
  if (!h.matrix().allFinite()) throw Error(ErrorKind::Shape, "exp_map: non-finite tangent vector");
  Eigen::JacobiSVD<Matrix> svd(h.matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const Matrix& v = svd.matrixV();
  const Matrix y = x.basis() * v * s.array().cos().matrix().asDiagonal() * v.transpose() +
                   svd.matrixU() * s.array().sin().matrix().asDiagonal() * v.transpose();
  return GrassmannPoint::validate(orthonormalize(y), 1e-10);
}

double inner(const TangentVector& a, const TangentVector& b) {
  if (!a.base().same_representative(b.base())) {
    throw Error(ErrorKind::BaseMismatch, "inner: tangent vectors are based at different representatives");
  }
  // trace(A^T B) without forming the product.
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

double norm(const TangentVector& h) { return h.matrix().norm(); }

Vector principal_angles(const GrassmannPoint& x, const GrassmannPoint& y) {
  check_same_shape(x.basis(), y.basis(), "principal_angles");
  Eigen::JacobiSVD<Matrix> svd(x.basis().transpose() * y.basis());
  // Singular values come out descending, so the angles come out ascending.
  return svd.singularValues().unaryExpr([](double c) { return std::acos(std::clamp(c, 0.0, 1.0)); });
}

double geodesic_distance(const GrassmannPoint& x, const GrassmannPoint& y) { return principal_angles(x, y).norm(); }

Matrix orthonormalize(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace glrr

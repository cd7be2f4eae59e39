#pragma once

#include <memory>

#include <Eigen/Dense>

#include "glrr/error.hpp"

namespace glrr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A point on G(p, d), held through one d x p Stiefel representative.
///
/// The basis is immutable and shared, so copies are cheap and tangent
/// vectors can refer back to their base without duplicating it.
class GrassmannPoint {
 public:
  /// Wraps `basis` if it has orthonormal columns within `tol` (Frobenius
  /// norm of basis^T basis - I). Throws Shape or NotOrthonormal.
  static GrassmannPoint validate(Matrix basis, double tol = 1e-10);

  const Matrix& basis() const noexcept { return *basis_; }
  Eigen::Index ambient_dim() const noexcept { return basis_->rows(); }
  Eigen::Index subspace_dim() const noexcept { return basis_->cols(); }

  /// Orthogonal projector basis * basis^T, the representative-free form.
  Matrix projector() const;

  /// Same point, different representative: basis * q for orthogonal q.
  GrassmannPoint right_act(const Matrix& q) const;

  /// True when both points hold the same representative (not just the same
  /// subspace).
  bool same_representative(const GrassmannPoint& other) const;

 private:
  explicit GrassmannPoint(std::shared_ptr<const Matrix> basis) : basis_(std::move(basis)) {}

  std::shared_ptr<const Matrix> basis_;
};

/// Horizontal lift H at a representative X, with X^T H = 0.
class TangentVector {
 public:
  /// Checks horizontality within `tol`; throws Shape or BaseMismatch.
  TangentVector(GrassmannPoint base, Matrix h, double tol = 1e-10);

  const GrassmannPoint& base() const noexcept { return base_; }
  const Matrix& matrix() const noexcept { return h_; }

  static TangentVector zero(const GrassmannPoint& base);

 private:
  struct Unchecked {};
  TangentVector(Unchecked, GrassmannPoint base, Matrix h) : base_(std::move(base)), h_(std::move(h)) {}
  friend TangentVector log_map(const GrassmannPoint&, const GrassmannPoint&);

  GrassmannPoint base_;
  Matrix h_;
};

GrassmannPoint validate_stiefel(const Matrix& m, double tol = 1e-10);

/// Dominant p-dimensional left singular subspace of a d x M sample matrix.
/// Each column of the basis has its largest-magnitude entry made positive.
GrassmannPoint from_samples(const Matrix& samples, Eigen::Index p);

/// Grassmann logarithm: the SVD U S V^T of (Y - X X^T Y)(X^T Y)^{-1} gives
/// H = U atan(S) V^T. Throws LogUndefined when X^T Y has a singular value
/// below 1e-10 (a principal angle at pi/2).
TangentVector log_map(const GrassmannPoint& x, const GrassmannPoint& y);

/// Raw-matrix form of log_map used by the Gram kernels; `x` and `y` must be
/// orthonormal with matching shape.
Matrix log_map_matrix(const Matrix& x, const Matrix& y);

/// Grassmann exponential with the right factor fixed to V:
/// X V cos(S) V^T + U sin(S) V^T for H = U S V^T, re-orthonormalized by QR.
GrassmannPoint exp_map(const GrassmannPoint& x, const TangentVector& h);

double inner(const TangentVector& a, const TangentVector& b);
double norm(const TangentVector& h);

/// Principal angles in ascending order, from arccos of the singular values
/// of X^T Y clamped to [0, 1].
Vector principal_angles(const GrassmannPoint& x, const GrassmannPoint& y);

/// Geodesic distance sqrt(sum theta_l^2).
double geodesic_distance(const GrassmannPoint& x, const GrassmannPoint& y);

/// Q factor of a thin QR with diag(R) made positive.
Matrix orthonormalize(const Matrix& m);

}  // namespace glrr

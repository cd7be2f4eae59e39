#include "glrr/gram.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include <Eigen/Eigenvalues>

namespace glrr {

namespace {

void check_points(const std::vector<GrassmannPoint>& points) {
  if (points.size() < 2) throw Error(ErrorKind::Shape, "build_gram needs at least 2 points");
  const auto d = points.front().ambient_dim();
  const auto p = points.front().subspace_dim();
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].ambient_dim() != d || points[i].subspace_dim() != p) {
      throw Error(ErrorKind::Shape, "build_gram: point " + std::to_string(i) + " is not on G(" + std::to_string(p) +
                                        ", " + std::to_string(d) + ")");
    }
  }
}

[[noreturn]] void rethrow_with_pair(std::size_t i, std::size_t j, const Error& e) {
  throw LogUndefinedPair(i, j, e.what());
}

// Columns are vec(Log_{X_i}(X_j)); column i stays zero.
Matrix stacked_logs(const std::vector<GrassmannPoint>& points, std::size_t i) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto d = points[i].ambient_dim();
  const auto p = points[i].subspace_dim();
  Matrix logs = Matrix::Zero(d * p, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (static_cast<std::size_t>(j) == i) continue;
    try {
      logs.col(j) = log_map_matrix(points[i].basis(), points[static_cast<std::size_t>(j)].basis()).reshaped();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::LogUndefined) rethrow_with_pair(i, static_cast<std::size_t>(j), e);
      throw;
    }
  }
  return logs;
}

}  // namespace

void GramTensor::check_shape() const {
  const auto n = static_cast<Eigen::Index>(slices.size());
  for (const auto& s : slices) {
    if (s.rows() != n || s.cols() != n) throw Error(ErrorKind::Shape, "Gram tensor slices must be N x N");
  }
}

GramTensor build_gram(const std::vector<GrassmannPoint>& points) {
  check_points(points);
  const auto n = static_cast<long>(points.size());
  GramTensor out;
  out.slices.resize(points.size());
  std::vector<std::exception_ptr> failures(points.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const Matrix logs = stacked_logs(points, idx);
      Matrix g = logs.transpose() * logs;
      out.slices[idx] = 0.5 * (g + g.transpose());
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }

  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

double eta_b(const GramTensor& b) {
  double worst = 0.0;
  for (const auto& slice : b.slices) {
    if (slice.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(slice, Eigen::EigenvaluesOnly);
    const double spectral = eig.eigenvalues().cwiseAbs().maxCoeff();
    worst = std::max(worst, spectral * spectral);
  }
  return worst + static_cast<double>(b.n_points()) + 1.0;
}

namespace serial {

GramTensor build_gram(const std::vector<GrassmannPoint>& points) {
  check_points(points);
  const std::size_t n = points.size();
  GramTensor out;
  out.slices.assign(n, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<TangentVector> logs;
    logs.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        logs.push_back(TangentVector::zero(points[i]));
        continue;
      }
      try {
        logs.push_back(log_map(points[i], points[j]));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::LogUndefined) rethrow_with_pair(i, j, e);
        throw;
      }
    }
    auto& slice = out.slices[i];
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        const double v = inner(logs[j], logs[k]);
        slice(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
        slice(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
      }
    }
  }
  return out;
}

}  // namespace serial

}  // namespace glrr

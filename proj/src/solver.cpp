#include "glrr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include <Eigen/SVD>

namespace glrr {

namespace {

void check_compatible(const Matrix& w, const GramTensor& b) {
  const auto n = static_cast<Eigen::Index>(b.n_points());
  if (w.rows() != n || w.cols() != n) throw Error(ErrorKind::Shape, "W must be N x N to match the Gram tensor");
  b.check_shape();
}

Vector row_residuals(const Matrix& w) { return w.rowwise().sum().array() - 1.0; }

double quadratic_part(const Matrix& w, const GramTensor& b) {
  double quad = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    quad += w.row(i) * b[static_cast<std::size_t>(i)] * w.row(i).transpose();
  }
  return quad;
}

struct Shrunk {
  Matrix z;
  double nuclear_norm = 0.0;
};

Shrunk shrink(const Matrix& m, double tau) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "svt: SVD did not converge");
  const Vector shrunk = (svd.singularValues().array() - tau).cwiseMax(0.0).matrix();
  Eigen::Index rank = 0;
  while (rank < shrunk.size() && shrunk(rank) > 0.0) ++rank;
  if (rank == 0) return {Matrix::Zero(m.rows(), m.cols()), 0.0};
  return {svd.matrixU().leftCols(rank) * shrunk.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose(),
          shrunk.head(rank).sum()};
}

}  // namespace

void SolverConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Validation, "solver config: " + msg); };
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be a finite non-negative number");
  if (!(beta0 > 0.0)) fail("beta0 must be positive");
  if (!(beta0 < beta_max)) fail("beta0 must be below beta_max");
  if (!(rho0 >= 1.0)) fail("rho0 must be >= 1");
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) fail("tolerances must be positive");
  if (max_iters < 1) fail("max_iters must be >= 1");
}

SolverState SolverState::initial(std::size_t n, const SolverConfig& config) {
  const auto size = static_cast<Eigen::Index>(n);
  SolverState s;
  s.w = Matrix::Zero(size, size);
  s.y = Vector::Zero(size);
  s.beta = config.beta0;
  return s;
}

double objective(const Matrix& w, const GramTensor& b, double lambda) {
  check_compatible(w, b);
  const double quad = quadratic_part(w, b);
  if (lambda == 0.0) return quad;
  Eigen::BDCSVD<Matrix> svd(w);
  return quad + lambda * svd.singularValues().sum();
}

Matrix gradient_f(const Matrix& w, const GramTensor& b, const Vector& y, double beta) {
  check_compatible(w, b);
  const Eigen::Index n = w.rows();
  if (y.size() != n) throw Error(ErrorKind::Shape, "multiplier vector must have length N");
  const Vector shift = y + beta * row_residuals(w);
  Matrix g(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    g.row(i).noalias() = w.row(i) * b[static_cast<std::size_t>(i)];
    g.row(i).array() += shift(i);
  }
  return g;
}

Matrix svt(const Matrix& m, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::Validation, "svt: tau must be non-negative");
  if (tau == 0.0) return m;
  return shrink(m, tau).z;
}

SolverState step(SolverState state, const GramTensor& b, double eta, const SolverConfig& config) {
  if (!(eta > 0.0)) throw Error(ErrorKind::Validation, "step: eta must be positive");
  const double beta_k = state.beta;
  const double scale = eta * beta_k;
  const Matrix grad = gradient_f(state.w, b, state.y, beta_k);
  const Matrix target = state.w - grad / scale;
  if (!target.allFinite()) throw Error(ErrorKind::NumericalFailure, "step: iterate became non-finite");

  // The nuclear norm of the new iterate falls out of the shrinkage for free.
  Shrunk next = shrink(target, config.lambda / scale);
  Matrix next_w = std::move(next.z);
  const Vector residual = row_residuals(next_w);
  const double delta = (next_w - state.w).norm();

  state.y += beta_k * residual;
  const double rho = beta_k * delta <= config.eps1 ? config.rho0 : 1.0;
  state.beta = std::min(config.beta_max, rho * beta_k);
  state.w = std::move(next_w);
  state.iteration += 1;
  state.history.push_back(
      IterationRecord{state.iteration, quadratic_part(state.w, b) + config.lambda * next.nuclear_norm,
                      residual.norm(), delta, beta_k});
  return state;
}

bool meets_stopping_rule(const IterationRecord& rec, const SolverConfig& config) {
  return rec.beta * rec.delta_w <= config.eps1 && rec.constraint_residual <= config.eps2;
}

SolveResult solve(const GramTensor& b, const SolverConfig& config) {
  config.validate();
  b.check_shape();
  if (b.n_points() == 0) throw Error(ErrorKind::Shape, "solve: empty Gram tensor");
  const double eta = eta_b(b);

  SolveResult result;
  result.state = SolverState::initial(b.n_points(), config);
  result.state.history.reserve(static_cast<std::size_t>(config.max_iters));
  for (int k = 0; k < config.max_iters; ++k) {
    result.state = step(std::move(result.state), b, eta, config);
    if (meets_stopping_rule(result.state.history.back(), config)) {
      result.status = SolveStatus::Converged;
      break;
    }
  }
  result.w = result.state.w;
  return result;
}

void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& history) {
  os << "iter,objective,constraint_residual,delta_w,beta\n";
  os << std::setprecision(17);
  for (const auto& r : history) {
    os << r.iter << ',' << r.objective << ',' << r.constraint_residual << ',' << r.delta_w << ',' << r.beta << '\n';
  }
}

namespace serial {

Matrix gradient_f(const Matrix& w, const GramTensor& b, const Vector& y, double beta) {
  check_compatible(w, b);
  const Eigen::Index n = w.rows();
  if (y.size() != n) throw Error(ErrorKind::Shape, "multiplier vector must have length N");
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) row_sum += w(i, j);
    const double shift = y(i) + beta * (row_sum - 1.0);
    const Matrix& bi = b[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < n; ++k) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) acc += w(i, j) * bi(j, k);
      g(i, k) = acc + shift;
    }
  }
  return g;
}

}  // namespace serial

}  // namespace glrr

#pragma once

#include <iosfwd>
#include <vector>

#include "glrr/gram.hpp"

namespace glrr {

struct SolverConfig {
  double lambda = 0.3;
  double rho0 = 1.9;
  double beta0 = 0.1;
  double beta_max = 1e6;
  double eps1 = 1e-4;
  double eps2 = 1e-4;
  int max_iters = 20000;

  /// Throws Validation on lambda < 0, beta0 >= beta_max, rho0 < 1,
  /// non-positive tolerances or max_iters < 1.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  /// ||W_{k+1} 1 - 1||_2
  double constraint_residual = 0.0;
  /// ||W_{k+1} - W_k||_F
  double delta_w = 0.0;
  /// beta_k, the penalty used to produce this iterate.
  double beta = 0.0;
};

struct SolverState {
  Matrix w;
  Vector y;
  double beta = 0.0;
  int iteration = 0;
  std::vector<IterationRecord> history;

  /// W = 0, y = 0, beta = beta0.
  static SolverState initial(std::size_t n, const SolverConfig& config);
};

enum class SolveStatus { Converged, MaxItersExceeded };

struct SolveResult {
  Matrix w;
  SolverState state;
  SolveStatus status = SolveStatus::MaxItersExceeded;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// sum_i w_i B_i w_i^T + lambda ||W||_*  (w_i is row i of W).
double objective(const Matrix& w, const GramTensor& b, double lambda);

/// Gradient of the smooth augmented-Lagrangian part
///   F(W) = sum_i 1/2 w_i B_i w_i^T + y_i r_i + beta/2 r_i^2,  r_i = sum_j w_ij - 1,
/// whose row i is w_i B_i + (y_i + beta r_i) 1.
Matrix gradient_f(const Matrix& w, const GramTensor& b, const Vector& y, double beta);

/// Singular value thresholding U max(S - tau, 0) V^T, the prox of tau ||.||_*.
Matrix svt(const Matrix& m, double tau);

/// One linearized augmented-Lagrangian iteration: SVT step on W, multiplier
/// update from the new row sums, then beta <- min(beta_max, rho beta) with
/// rho = rho0 only when beta_k ||W_{k+1} - W_k||_F <= eps1.
SolverState step(SolverState state, const GramTensor& b, double eta, const SolverConfig& config);

/// True when the last recorded iterate meets both stopping conditions.
bool meets_stopping_rule(const IterationRecord& rec, const SolverConfig& config);

/// Iterates from W = 0, y = 0 until both stopping conditions hold or
/// max_iters is reached; in the latter case the last iterate is returned
/// with status MaxItersExceeded.
SolveResult solve(const GramTensor& b, const SolverConfig& config);

/// CSV columns: iter,objective,constraint_residual,delta_w,beta
void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& history);

namespace serial {

Matrix gradient_f(const Matrix& w, const GramTensor& b, const Vector& y, double beta);

}  // namespace serial

}  // namespace glrr

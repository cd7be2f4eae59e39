#include "glrr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

namespace glrr {

namespace {

// Renumber labels in order of first appearance.
std::vector<int> canonical_labels(const std::vector<int>& raw, int k) {
  std::vector<int> remap(static_cast<std::size_t>(k), -1);
  std::vector<int> out(raw.size());
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto& slot = remap[static_cast<std::size_t>(raw[i])];
    if (slot < 0) slot = next++;
    out[i] = slot;
  }
  return out;
}

struct Run {
  std::vector<int> labels;
  Matrix centers;
  double inertia = std::numeric_limits<double>::infinity();
};

Matrix plus_plus_seeds(const Matrix& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  Eigen::Index pick = first(rng);
  chosen[static_cast<std::size_t>(pick)] = true;
  centers.row(0) = x.row(pick);
  Vector d2 = (x.rowwise() - x.row(pick)).rowwise().squaredNorm();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      pick = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2(i) <= 0.0) continue;
        acc += d2(i);
        pick = i;
        if (acc >= target) break;
      }
    } else {
      // Every remaining point coincides with a center; take an unused index.
      std::vector<Eigen::Index> unused;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) unused.push_back(i);
      }
      std::uniform_int_distribution<std::size_t> any(0, unused.size() - 1);
      pick = unused[any(rng)];
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }
  return centers;
}

Run lloyd(const Matrix& x, int k, std::uint64_t seed, const KMeansOptions& options) {
  std::mt19937_64 rng(seed);
  const Eigen::Index n = x.rows();
  Run run;
  run.centers = plus_plus_seeds(x, k, rng);
  run.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);
  double previous = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < options.max_iters; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      dist(i) = (run.centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
      run.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    const double inertia = dist.sum();
    run.inertia = inertia;
    if (inertia == 0.0 || std::abs(previous - inertia) <= options.rel_tol * previous) break;
    previous = inertia;

    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = run.labels[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        run.centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: reseed at the point farthest from its center.
        Eigen::Index far = 0;
        dist.maxCoeff(&far);
        run.centers.row(c) = x.row(far);
        dist(far) = 0.0;
      }
    }
  }
  return run;
}

void check_kmeans_args(const Matrix& points, int k, const KMeansOptions& options) {
  if (points.rows() == 0) throw Error(ErrorKind::Shape, "kmeans: no points");
  if (k < 1 || k > points.rows()) {
    throw Error(ErrorKind::Validation, "kmeans: k = " + std::to_string(k) + " must lie in [1, N]");
  }
  if (options.restarts < 1 || options.max_iters < 1) throw Error(ErrorKind::Validation, "kmeans: bad options");
}

KMeansResult finish(Run best, int k) {
  KMeansResult out;
  // Reorder centers to follow the canonical labels.
  std::vector<int> order(static_cast<std::size_t>(k), -1);
  const auto canon = canonical_labels(best.labels, k);
  for (std::size_t i = 0; i < canon.size(); ++i) order[static_cast<std::size_t>(canon[i])] = best.labels[i];
  out.centers = Matrix::Zero(k, best.centers.cols());
  for (int c = 0; c < k; ++c) {
    if (order[static_cast<std::size_t>(c)] >= 0) {
      out.centers.row(c) = best.centers.row(order[static_cast<std::size_t>(c)]);
    }
  }
  out.assignment.labels = canon;
  out.assignment.k = k;
  out.inertia = best.inertia;
  return out;
}

}  // namespace

void ClusterAssignment::check() const {
  if (k < 1) throw Error(ErrorKind::Validation, "cluster count must be positive");
  for (int l : labels) {
    if (l < 0 || l >= k) throw Error(ErrorKind::Validation, "label " + std::to_string(l) + " outside [0, k)");
  }
}

Affinity affinity_from_w(const Matrix& w) {
  if (w.rows() != w.cols()) throw Error(ErrorKind::Shape, "affinity_from_w: W must be square");
  const Matrix mag = w.cwiseAbs();
  Affinity out{Matrix(w.rows(), w.cols())};
  // a(i,j) and a(j,i) are computed from the same two operands in the same order.
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      const double lo = i < j ? mag(i, j) : mag(j, i);
      const double hi = i < j ? mag(j, i) : mag(i, j);
      out.a(i, j) = (lo + hi) / 2.0;
    }
  }
  return out;
}

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options) {
  check_kmeans_args(points, k, options);
  std::vector<Run> runs(static_cast<std::size_t>(options.restarts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < options.restarts; ++r) {
    runs[static_cast<std::size_t>(r)] = lloyd(points, k, seed + static_cast<std::uint64_t>(r), options);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  return finish(std::move(runs[best]), k);
}

namespace serial {

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options) {
  check_kmeans_args(points, k, options);
  Run best;
  for (int r = 0; r < options.restarts; ++r) {
    Run run = lloyd(points, k, seed + static_cast<std::uint64_t>(r), options);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return finish(std::move(best), k);
}

}  // namespace serial

SpectralVariant parse_spectral_variant(const std::string& name) {
  if (name == "njw") return SpectralVariant::Njw;
  if (name == "shi-malik") return SpectralVariant::ShiMalik;
  throw Error(ErrorKind::Validation, "unknown spectral variant '" + name + "' (expected njw or shi-malik)");
}

std::string to_string(SpectralVariant v) { return v == SpectralVariant::Njw ? "njw" : "shi-malik"; }

Matrix spectral_embedding(const Affinity& affinity, int k, SpectralVariant variant) {
  const Matrix& a = affinity.a;
  if (a.rows() != a.cols()) throw Error(ErrorKind::Shape, "affinity must be square");
  if (k < 2 || k > a.rows()) throw Error(ErrorKind::Validation, "spectral_cluster: k must lie in [2, N]");
  if (!a.allFinite() || (a.array() < 0.0).any()) {
    throw Error(ErrorKind::Validation, "affinity must be finite and non-negative");
  }
  if ((a.array() == 0.0).all()) throw Error(ErrorKind::DegenerateAffinity, "affinity matrix is all zero");

  const Vector inv_sqrt_deg = a.rowwise().sum().cwiseMax(1e-12).cwiseSqrt().cwiseInverse();
  const Eigen::Index n = a.rows();
  Matrix lap = -(inv_sqrt_deg.asDiagonal() * a * inv_sqrt_deg.asDiagonal());
  lap.diagonal().array() += 1.0;
  lap = 0.5 * (lap + lap.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "Laplacian eigensolve failed");
  Matrix u = eig.eigenvectors().leftCols(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(u(i, c)) > 1e-12) {
        if (u(i, c) < 0.0) u.col(c) = -u.col(c);
        break;
      }
    }
  }

  if (variant == SpectralVariant::ShiMalik) return inv_sqrt_deg.asDiagonal() * u;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double len = u.row(i).norm();
    if (len > 0.0) u.row(i) /= len;
  }
  return u;
}

ClusterAssignment spectral_cluster(const Affinity& affinity, int k, std::uint64_t seed,
                                   const SpectralOptions& options) {
  return kmeans(spectral_embedding(affinity, k, options.variant), k, seed, options.kmeans).assignment;
}

Eigen::MatrixXi contingency_table(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  if (pred.labels.size() != truth.labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "prediction has " + std::to_string(pred.labels.size()) +
                                               " labels, truth has " + std::to_string(truth.labels.size()));
  }
  auto span = [](const ClusterAssignment& c) {
    int top = c.k;
    for (int l : c.labels) {
      if (l < 0) throw Error(ErrorKind::Validation, "negative label");
      top = std::max(top, l + 1);
    }
    return top;
  };
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(span(pred), span(truth));
  for (std::size_t i = 0; i < pred.labels.size(); ++i) ++table(pred.labels[i], truth.labels[i]);
  return table;
}

std::vector<int> hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw Error(ErrorKind::Shape, "hungarian: cost must be square");
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // Shortest augmenting path with potentials; 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int r0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int c = 1; c <= n; ++c) assignment[static_cast<std::size_t>(match[c] - 1)] = c - 1;
  return assignment;
}

double accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  if (pred.labels.empty()) return 1.0;
  const Eigen::Index side = std::max(table.rows(), table.cols());
  Matrix cost = Matrix::Zero(side, side);
  cost.topLeftCorner(table.rows(), table.cols()) = -table.cast<double>();
  const auto match = hungarian(cost);
  long correct = 0;
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    const int c = match[static_cast<std::size_t>(r)];
    if (c < table.cols()) correct += table(r, c);
  }
  return static_cast<double>(correct) / static_cast<double>(pred.labels.size());
}

double block_mass_fraction(const Matrix& w, const ClusterAssignment& truth) {
  const auto n = static_cast<Eigen::Index>(truth.labels.size());
  if (w.rows() != n || w.cols() != n) throw Error(ErrorKind::LengthMismatch, "W and labels disagree in size");
  double inside = 0.0;
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(w(i, j));
      total += m;
      if (truth.labels[static_cast<std::size_t>(i)] == truth.labels[static_cast<std::size_t>(j)]) inside += m;
    }
  }
  return total > 0.0 ? inside / total : 0.0;
}

void print_contingency(std::ostream& os, const Eigen::MatrixXi& table) {
  os << "pred\\true";
  for (Eigen::Index c = 0; c < table.cols(); ++c) os << std::setw(6) << c;
  os << '\n';
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    os << std::setw(9) << r;
    for (Eigen::Index c = 0; c < table.cols(); ++c) os << std::setw(6) << table(r, c);
    os << '\n';
  }
}

}  // namespace glrr

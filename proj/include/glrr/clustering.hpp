#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "glrr/manifold.hpp"

namespace glrr {

/// Symmetric, entrywise non-negative similarity matrix.
struct Affinity {
  Matrix a;
};

struct ClusterAssignment {
  std::vector<int> labels;
  int k = 0;

  /// Throws Validation unless every label lies in [0, k).
  void check() const;
};

/// (|W| + |W^T|) / 2, symmetric bit for bit.
Affinity affinity_from_w(const Matrix& w);

struct KMeansOptions {
  int restarts = 20;
  int max_iters = 300;
  double rel_tol = 1e-9;
};

struct KMeansResult {
  ClusterAssignment assignment;
  Matrix centers;
  double inertia = 0.0;
};

/// k-means++ seeding followed by Lloyd iterations, best inertia over
/// `restarts` runs. Restart r uses seed + r; ties go to the lowest restart
/// index, so the result does not depend on the thread count.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

enum class SpectralVariant {
  /// Symmetric normalized Laplacian, row-normalized embedding.
  Njw,
  /// Random-walk Laplacian eigenvectors D^{-1/2} u, no row normalization.
  ShiMalik,
};

SpectralVariant parse_spectral_variant(const std::string& name);
std::string to_string(SpectralVariant v);

struct SpectralOptions {
  SpectralVariant variant = SpectralVariant::Njw;
  KMeansOptions kmeans;
};

/// Spectral embedding of the k smallest eigenpairs of the normalized
/// Laplacian, clustered with seeded k-means. Throws DegenerateAffinity on an
/// all-zero matrix.
ClusterAssignment spectral_cluster(const Affinity& affinity, int k, std::uint64_t seed,
                                   const SpectralOptions& options = {});

/// The N x k embedding used by spectral_cluster, exposed for inspection.
Matrix spectral_embedding(const Affinity& affinity, int k, SpectralVariant variant);

/// Fraction of points correctly labeled under the best one-to-one matching of
/// predicted to true labels (Hungarian algorithm on the contingency table).
double accuracy(const ClusterAssignment& pred, const ClusterAssignment& truth);

/// rows: predicted label, cols: true label.
Eigen::MatrixXi contingency_table(const ClusterAssignment& pred, const ClusterAssignment& truth);

/// Minimum-cost perfect assignment on a square cost matrix; returns the
/// column assigned to each row.
std::vector<int> hungarian(const Matrix& cost);

/// Share of sum |W_ij| falling on pairs with equal true labels.
double block_mass_fraction(const Matrix& w, const ClusterAssignment& truth);

void print_contingency(std::ostream& os, const Eigen::MatrixXi& table);

namespace serial {

/// Same contract as glrr::kmeans with the restarts run one after another.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace serial

}  // namespace glrr

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "glrr/clustering.hpp"
#include "glrr/parallel.hpp"
#include "test_support.hpp"

using namespace glrr;

namespace {

// Accuracy by trying every label permutation.
double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth, int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[static_cast<std::size_t>(pred[i])] == truth[i];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

Affinity two_cliques() {
  Matrix a = Matrix::Zero(6, 6);
  a.topLeftCorner(3, 3).setOnes();
  a.bottomRightCorner(3, 3).setOnes();
  return {a};
}

}  // namespace

TEST_CASE("affinity_from_w") {
  CHECK(affinity_from_w(Matrix::Zero(3, 3)).a.norm() == 0.0);
  Matrix w(2, 2);
  w << 0, -2, 4, 0;
  Matrix expected(2, 2);
  expected << 0, 3, 3, 0;
  CHECK(affinity_from_w(w).a == expected);

  std::mt19937_64 rng(3);
  const Matrix r = glrr::testing::gaussian(7, 7, rng) * 1e-3 + glrr::testing::gaussian(7, 7, rng);
  const Matrix a = affinity_from_w(r).a;
  CHECK(a == a.transpose());
  CHECK(a.minCoeff() >= 0.0);
  CHECK_THROWS_AS(affinity_from_w(Matrix::Zero(2, 3)), Error);
}

TEST_CASE("accuracy") {
  const ClusterAssignment truth{{0, 0, 1, 1, 2, 2}, 3};
  CHECK(accuracy(truth, truth) == 1.0);
  CHECK(accuracy(ClusterAssignment{{2, 2, 0, 0, 1, 1}, 3}, truth) == 1.0);
  CHECK(accuracy(ClusterAssignment{{0, 1, 0, 1}, 2}, ClusterAssignment{{0, 0, 1, 1}, 2}) == 0.5);
  CHECK_THROWS_AS(accuracy(ClusterAssignment{{0}, 1}, truth), Error);

  // More predicted clusters than true ones still matches one-to-one.
  CHECK(accuracy(ClusterAssignment{{0, 1, 2, 2}, 3}, ClusterAssignment{{0, 0, 1, 1}, 2}) == 0.75);

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> label(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> p(20), t(20);
    for (auto& v : p) v = label(rng);
    for (auto& v : t) v = label(rng);
    const double acc = accuracy(ClusterAssignment{p, 4}, ClusterAssignment{t, 4});
    CHECK(acc == doctest::Approx(brute_force_accuracy(p, t, 4)));
    // Relabeling either side changes nothing.
    std::vector<int> perm{2, 0, 3, 1};
    std::vector<int> q(20);
    for (std::size_t i = 0; i < 20; ++i) q[i] = perm[static_cast<std::size_t>(p[i])];
    CHECK(accuracy(ClusterAssignment{q, 4}, ClusterAssignment{t, 4}) == acc);
  }
}

TEST_CASE("hungarian solves small assignments") {
  Matrix cost(3, 3);
  cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto a = hungarian(cost);
  double total = 0.0;
  for (int r = 0; r < 3; ++r) total += cost(r, a[static_cast<std::size_t>(r)]);
  CHECK(total == 5.0);
}

TEST_CASE("kmeans") {
  SUBCASE("separated 1-D blobs") {
    Matrix x(4, 1);
    x << 0.0, 0.1, 10.0, 10.1;
    const auto r = kmeans(x, 2, 0);
    CHECK(r.assignment.labels[0] == r.assignment.labels[1]);
    CHECK(r.assignment.labels[2] == r.assignment.labels[3]);
    CHECK(r.assignment.labels[0] != r.assignment.labels[2]);
  }
  SUBCASE("k = N gives zero inertia") {
    std::mt19937_64 rng(4);
    const Matrix x = glrr::testing::gaussian(7, 3, rng);
    const auto r = kmeans(x, 7, 1);
    CHECK(r.inertia == 0.0);
    std::vector<int> sorted = r.assignment.labels;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
  SUBCASE("gaussian mixture recovered exactly") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> noise(0.0, 0.1);
    const double centers[3][2] = {{0, 0}, {6, 0}, {0, 6}};
    Matrix x(150, 2);
    ClusterAssignment truth{{}, 3};
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 50; ++i) {
        x(c * 50 + i, 0) = centers[c][0] + noise(rng);
        x(c * 50 + i, 1) = centers[c][1] + noise(rng);
        truth.labels.push_back(c);
      }
    }
    CHECK(accuracy(kmeans(x, 3, 99).assignment, truth) == 1.0);
  }
  SUBCASE("deterministic and equal to the serial reference") {
    std::mt19937_64 rng(15);
    const Matrix x = glrr::testing::gaussian(60, 4, rng);
    const auto a = kmeans(x, 5, 3);
    const auto b = kmeans(x, 5, 3);
    const auto ref = serial::kmeans(x, 5, 3);
    CHECK(a.assignment.labels == b.assignment.labels);
    CHECK(a.assignment.labels == ref.assignment.labels);
    CHECK(a.inertia == ref.inertia);
    const int before = max_threads();
    set_max_threads(3);
    CHECK(kmeans(x, 5, 3).assignment.labels == ref.assignment.labels);
    set_max_threads(before);
  }
  SUBCASE("bad k") {
    CHECK_THROWS_AS(kmeans(Matrix::Zero(3, 1), 4, 0), Error);
    CHECK_THROWS_AS(kmeans(Matrix::Zero(3, 1), 0, 0), Error);
  }
}

TEST_CASE("spectral clustering") {
  SUBCASE("disconnected cliques split for any seed") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (auto variant : {SpectralVariant::Njw, SpectralVariant::ShiMalik}) {
        const auto r = spectral_cluster(two_cliques(), 2, seed, {variant, {}});
        CHECK(accuracy(r, ClusterAssignment{{0, 0, 0, 1, 1, 1}, 2}) == 1.0);
      }
    }
  }
  SUBCASE("three blocks with weak cross links") {
    Matrix a = Matrix::Constant(9, 9, 0.01);
    for (int c = 0; c < 3; ++c) a.block(3 * c, 3 * c, 3, 3).setConstant(1.0);
    const auto r = spectral_cluster({a}, 3, 5);
    CHECK(accuracy(r, ClusterAssignment{{0, 0, 0, 1, 1, 1, 2, 2, 2}, 3}) == 1.0);
  }
  SUBCASE("all-ones is deterministic given the seed") {
    const Affinity ones{Matrix::Ones(6, 6)};
    CHECK(spectral_cluster(ones, 2, 7).labels == spectral_cluster(ones, 2, 7).labels);
  }
  SUBCASE("degenerate input") {
    try {
      spectral_cluster({Matrix::Zero(4, 4)}, 2, 0);
      FAIL("expected DegenerateAffinity");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateAffinity);
    }
    CHECK_THROWS_AS(spectral_cluster(two_cliques(), 1, 0), Error);
  }
  SUBCASE("isolated vertex is tolerated") {
    Matrix a = two_cliques().a;
    Matrix b = Matrix::Zero(7, 7);
    b.topLeftCorner(6, 6) = a;
    CHECK_NOTHROW(spectral_cluster({b}, 2, 0));
  }
  SUBCASE("variant names") {
    CHECK(parse_spectral_variant("njw") == SpectralVariant::Njw);
    CHECK(parse_spectral_variant("shi-malik") == SpectralVariant::ShiMalik);
    CHECK_THROWS_AS(parse_spectral_variant("ratio"), Error);
  }
}

TEST_CASE("block mass fraction") {
  Matrix w = Matrix::Zero(4, 4);
  w(0, 1) = 2.0;
  w(2, 3) = -1.0;
  w(0, 3) = 1.0;
  CHECK(block_mass_fraction(w, ClusterAssignment{{0, 0, 1, 1}, 2}) == doctest::Approx(0.75));
}

#include <doctest.h>

#include <cmath>

#include "glrr/gram.hpp"
#include "glrr/parallel.hpp"
#include "test_support.hpp"

using namespace glrr;
using glrr::testing::random_point;

namespace {

GrassmannPoint line(double angle) {
  Matrix m = Matrix::Zero(3, 1);
  m(0, 0) = std::cos(angle);
  m(1, 0) = std::sin(angle);
  return GrassmannPoint::validate(m);
}

std::vector<GrassmannPoint> cloud(int n, Eigen::Index d, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix center = glrr::testing::random_stiefel(d, p, rng);
  std::vector<GrassmannPoint> pts;
  for (int i = 0; i < n; ++i) {
    pts.push_back(GrassmannPoint::validate(
        glrr::testing::gram_schmidt(center + 0.3 * glrr::testing::gaussian(d, p, rng))));
  }
  return pts;
}

double max_abs_diff(const GramTensor& a, const GramTensor& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.n_points(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("identical points give an all-zero tensor") {
  const auto x = line(0.3);
  const auto b = build_gram({x, x, x});
  for (const auto& s : b.slices) CHECK(s.cwiseAbs().maxCoeff() == 0.0);
  CHECK(eta_b(b) == doctest::Approx(4.0));
}

TEST_CASE("two points at a single principal angle") {
  const double theta = 0.7;
  const auto b = build_gram({line(0.0), line(theta)});
  REQUIRE(b.n_points() == 2);
  CHECK(b[0](0, 0) == 0.0);
  CHECK(b[0](0, 1) == 0.0);
  CHECK(b[0](1, 1) == doctest::Approx(theta * theta).epsilon(1e-12));
  CHECK(b[1](0, 0) == doctest::Approx(theta * theta).epsilon(1e-12));
  // ||B_0||_2 = 0.49, so eta = 0.49^2 + 2 + 1.
  CHECK(eta_b(b) == doctest::Approx(3.2401).epsilon(1e-12));
}

TEST_CASE("slices factor as Gram matrices of vectorized logs") {
  const auto pts = cloud(5, 8, 2, 4);
  const auto b = build_gram(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Matrix stacked = Matrix::Zero(16, 5);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) stacked.col(static_cast<Eigen::Index>(j)) = log_map(pts[i], pts[j]).matrix().reshaped();
    }
    CHECK((b[i] - stacked.transpose() * stacked).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((b[i] - b[i].transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b[i].row(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(b[i]);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
  }
  CHECK(eta_b(b) >= 6.0);
}

TEST_CASE("parallel kernel matches the serial reference") {
  const auto pts = cloud(9, 12, 3, 7);
  const auto fast = build_gram(pts);
  const auto ref = serial::build_gram(pts);
  CHECK(max_abs_diff(fast, ref) < 1e-12);

  // Thread count must not change a single bit.
  const int before = max_threads();
  set_max_threads(1);
  const auto one = build_gram(pts);
  set_max_threads(4);
  const auto four = build_gram(pts);
  set_max_threads(before);
  CHECK(max_abs_diff(one, four) == 0.0);
}

TEST_CASE("representative invariance") {
  std::mt19937_64 rng(23);
  auto pts = cloud(6, 10, 3, 9);
  const auto b = build_gram(pts);
  for (auto& x : pts) x = x.right_act(glrr::testing::random_orthogonal(3, rng));
  CHECK(max_abs_diff(b, build_gram(pts)) < 1e-8);
}

TEST_CASE("cut-locus pairs are reported with their indices") {
  const auto a = GrassmannPoint::validate(Matrix::Identity(4, 2));
  Matrix m = Matrix::Zero(4, 2);
  m(2, 0) = 1.0;
  m(3, 1) = 1.0;
  const auto far = GrassmannPoint::validate(m);
  std::mt19937_64 rng(1);
  const auto mid = random_point(4, 2, rng);
  for (auto builder : {&build_gram, &serial::build_gram}) {
    try {
      builder({mid, a, far});
      FAIL("expected LogUndefinedPair");
    } catch (const LogUndefinedPair& e) {
      CHECK(e.kind() == ErrorKind::LogUndefined);
      CHECK(e.base() == 1);
      CHECK(e.other() == 2);
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(build_gram({line(0.0)}), Error);
  CHECK_THROWS_AS(build_gram({line(0.0), GrassmannPoint::validate(Matrix::Identity(3, 2))}), Error);
}

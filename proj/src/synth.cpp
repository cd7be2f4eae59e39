#include "glrr/synth.hpp"

#include <cstdio>
#include <random>
#include <string>

namespace glrr {

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal(rng);
  }
  return m;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (k < 1 || per_cluster < 1 || d < 1 || p < 1) throw Error(ErrorKind::Validation, "synthetic counts must be positive");
  if (p > d) throw Error(ErrorKind::Shape, "synthetic p exceeds d");
  if (!(noise >= 0.0)) throw Error(ErrorKind::Validation, "noise must be non-negative");
}

SyntheticData synth_grassmann(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  SyntheticData out;
  out.truth.k = spec.k;
  for (int c = 0; c < spec.k; ++c) {
    const Matrix center = orthonormalize(gaussian(spec.d, spec.p, rng));
    for (int m = 0; m < spec.per_cluster; ++m) {
      Matrix member = center;
      if (spec.noise > 0.0) member = orthonormalize(center + spec.noise * gaussian(spec.d, spec.p, rng));
      out.points.push_back(GrassmannPoint::validate(std::move(member)));
      out.truth.labels.push_back(c);
    }
  }
  return out;
}

std::vector<ImageSetGroup> synth_groups(const SyntheticSpec& spec) {
  const SyntheticData data = synth_grassmann(spec);
  std::vector<ImageSetGroup> groups;
  groups.reserve(data.points.size());
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "g%04zu", i);
    groups.push_back(ImageSetGroup{id, data.truth.labels[i], data.points[i].basis(), "synthetic"});
  }
  return groups;
}

}  // namespace glrr

#pragma once

#include <cstdint>
#include <vector>

#include "glrr/clustering.hpp"
#include "glrr/dataset.hpp"

namespace glrr {

struct SyntheticSpec {
  int k = 3;
  int per_cluster = 10;
  int d = 100;
  int p = 10;
  double noise = 0.03;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticData {
  std::vector<GrassmannPoint> points;
  ClusterAssignment truth;
};

/// One random orthonormal center per cluster; member = qr(center + noise * G)
/// with G standard Gaussian. Points are emitted cluster by cluster.
SyntheticData synth_grassmann(const SyntheticSpec& spec);

/// The same draw as image-set groups whose samples are the member bases, so
/// from_samples(group.samples, p) recovers each point. Ids are "g0000", ...
std::vector<ImageSetGroup> synth_groups(const SyntheticSpec& spec);

}  // namespace glrr

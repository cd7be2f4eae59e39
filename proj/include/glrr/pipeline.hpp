#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glrr/clustering.hpp"
#include "glrr/config.hpp"
#include "glrr/dataset.hpp"
#include "glrr/gram.hpp"
#include "glrr/solver.hpp"

namespace glrr {

using StageTimings = std::vector<std::pair<std::string, double>>;

/// Basis of every group via from_samples(samples, p), in group order.
std::vector<GrassmannPoint> points_from_groups(const std::vector<ImageSetGroup>& groups, int p);

struct ClusterOptions {
  SolverConfig solver;
  int k = 2;
  std::uint64_t seed = 0;
  SpectralOptions spectral;
};

struct ClusterOutcome {
  SolveResult solve;
  double eta = 0.0;
  ClusterAssignment labels;
  StageTimings timings;
};

/// build_gram -> solve -> affinity_from_w -> spectral_cluster. Stage errors
/// are rethrown with the stage name prefixed and the original kind kept.
ClusterOutcome cluster_points(const std::vector<GrassmannPoint>& points, const ClusterOptions& options);

struct Report {
  static constexpr int kSchemaVersion = 1;

  double accuracy = 0.0;
  std::size_t n_points = 0;
  ClusterOutcome outcome;
  ClusterAssignment truth;
  std::vector<std::string> group_ids;
  StageTimings timings;
  std::filesystem::path run_dir;

  /// JSON text of the report (schema_version, accuracy, solver status,
  /// timings, seeds and artifact names).
  std::string to_json(const PipelineConfig& config) const;
};

/// Full pipeline: data -> points -> Gram -> solve -> affinity -> spectral ->
/// accuracy. Writes config.toml, report.json, W.gmat, labels.csv, truth.csv
/// and history.csv under the run directory (out_dir/<timestamp> when
/// timestamped, else out_dir itself).
Report run_pipeline(const PipelineConfig& config);

}  // namespace glrr

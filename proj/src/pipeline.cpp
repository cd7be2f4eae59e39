#include "glrr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "glrr/io.hpp"
#include "glrr/synth.hpp"

namespace glrr {

namespace fs = std::filesystem;

namespace {

template <class F>
auto staged(const std::string& stage, StageTimings& timings, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  auto record = [&] {
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    timings.emplace_back(stage, took.count());
  };
  try {
    auto result = body();
    record();
    return result;
  } catch (const Error& e) {
    throw Error(e.kind(), "stage '" + stage + "': " + e.what());
  }
}

fs::path make_run_dir(const PipelineConfig& config) {
  if (!config.timestamped) {
    fs::create_directories(config.out_dir);
    return config.out_dir;
  }
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &utc);
  fs::path dir = config.out_dir / stamp;
  for (int suffix = 1; fs::exists(dir); ++suffix) dir = config.out_dir / (std::string(stamp) + "-" + std::to_string(suffix));
  fs::create_directories(dir);
  return dir;
}

std::vector<ImageSetGroup> load_groups(const PipelineConfig& config) {
  switch (config.source) {
    case DataSource::Synthetic:
      return synth_groups(config.synth);
    case DataSource::Dataset:
      return load_dataset(config.dataset_path, config.dataset_format);
    case DataSource::Mnist: {
      const Matrix images = read_idx3_images(config.mnist.dir / "train-images-idx3-ubyte");
      const auto labels = read_idx1_labels(config.mnist.dir / "train-labels-idx1-ubyte");
      return random_class_subgroups(images, labels, config.mnist.groups_per_class, config.mnist.group_size,
                                    config.mnist.grouping_seed);
    }
  }
  throw Error(ErrorKind::Validation, "unknown data source");
}

// Ground-truth labels renumbered densely in order of first appearance.
ClusterAssignment truth_from_groups(const std::vector<ImageSetGroup>& groups) {
  ClusterAssignment truth;
  std::vector<int> seen;
  for (const auto& g : groups) {
    auto it = std::find(seen.begin(), seen.end(), g.label);
    if (it == seen.end()) {
      seen.push_back(g.label);
      it = seen.end() - 1;
    }
    truth.labels.push_back(static_cast<int>(it - seen.begin()));
  }
  truth.k = static_cast<int>(seen.size());
  return truth;
}

}  // namespace

std::vector<GrassmannPoint> points_from_groups(const std::vector<ImageSetGroup>& groups, int p) {
  std::vector<GrassmannPoint> points;
  points.reserve(groups.size());
  for (const auto& g : groups) {
    try {
      points.push_back(from_samples(g.samples, p));
    } catch (const Error& e) {
      throw Error(e.kind(), "group " + g.id + ": " + e.what());
    }
  }
  return points;
}

ClusterOutcome cluster_points(const std::vector<GrassmannPoint>& points, const ClusterOptions& options) {
  options.solver.validate();
  if (options.k < 2) throw Error(ErrorKind::Validation, "k must be >= 2");
  if (static_cast<std::size_t>(options.k) > points.size()) throw Error(ErrorKind::Validation, "k exceeds the number of points");

  ClusterOutcome out;
  const GramTensor b = staged("gram", out.timings, [&] { return build_gram(points); });
  out.eta = eta_b(b);
  out.solve = staged("solve", out.timings, [&] { return solve(b, options.solver); });
  out.labels = staged("spectral", out.timings, [&] {
    return spectral_cluster(affinity_from_w(out.solve.w), options.k, options.seed, options.spectral);
  });
  return out;
}

std::string Report::to_json(const PipelineConfig& config) const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["accuracy"] = accuracy;
  j["n_points"] = n_points;
  j["k"] = config.k;
  j["p"] = config.p;
  j["lambda"] = config.solver.lambda;
  j["solver"] = {
      {"status", outcome.solve.converged() ? "converged" : "max_iters_exceeded"},
      {"iterations", outcome.solve.state.iteration},
      {"eta_b", outcome.eta},
      {"final_beta", outcome.solve.state.beta},
      {"final_constraint_residual",
       outcome.solve.state.history.empty() ? 0.0 : outcome.solve.state.history.back().constraint_residual},
      {"history", "history.csv"},
  };
  j["spectral"] = {{"variant", to_string(config.spectral_variant)}, {"seed", config.spectral_seed}};
  switch (config.source) {
    case DataSource::Synthetic:
      j["data"] = {{"source", "synthetic"},   {"k", config.synth.k},         {"per_cluster", config.synth.per_cluster},
                   {"d", config.synth.d},     {"p", config.synth.p},         {"noise", config.synth.noise},
                   {"seed", config.synth.seed}};
      break;
    case DataSource::Dataset:
      j["data"] = {{"source", "dataset"},
                   {"path", config.dataset_path.string()},
                   {"format", to_string(config.dataset_format)}};
      break;
    case DataSource::Mnist:
      j["data"] = {{"source", "mnist"},
                   {"dir", config.mnist.dir.string()},
                   {"groups_per_class", config.mnist.groups_per_class},
                   {"group_size", config.mnist.group_size},
                   {"grouping_seed", config.mnist.grouping_seed}};
      break;
  }
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [stage, seconds] : timings) t[stage] = seconds;
  j["timings_s"] = t;
  j["artifacts"] = {{"w", "W.gmat"}, {"labels", "labels.csv"}, {"truth", "truth.csv"}, {"config", "config.toml"}};
  return j.dump(2) + "\n";
}

Report run_pipeline(const PipelineConfig& config) {
  config.validate();
  Report report;

  const auto groups = staged("load", report.timings, [&] { return load_groups(config); });
  const auto points = staged("points", report.timings, [&] { return points_from_groups(groups, config.p); });
  report.n_points = points.size();
  report.truth = truth_from_groups(groups);
  for (const auto& g : groups) report.group_ids.push_back(g.id);

  ClusterOptions options;
  options.solver = config.solver;
  options.k = config.k;
  options.seed = config.spectral_seed;
  options.spectral.variant = config.spectral_variant;
  report.outcome = cluster_points(points, options);
  report.timings.insert(report.timings.end(), report.outcome.timings.begin(), report.outcome.timings.end());
  report.accuracy = accuracy(report.outcome.labels, report.truth);

  staged("write", report.timings, [&] {
    try {
      report.run_dir = make_run_dir(config);
    } catch (const fs::filesystem_error& e) {
      throw Error(ErrorKind::Io, e.what());
    }
    io::save_text(report.run_dir / "config.toml", config.source_text);
    io::save_gmat(report.run_dir / "W.gmat", report.outcome.solve.w);
    io::save_labels(report.run_dir / "labels.csv", report.outcome.labels.labels);
    io::save_labels(report.run_dir / "truth.csv", report.truth.labels);
    std::ostringstream history;
    write_history_csv(history, report.outcome.solve.state.history);
    io::save_text(report.run_dir / "history.csv", history.str());
    return 0;
  });
  io::save_text(report.run_dir / "report.json", report.to_json(config));
  return report;
}

}  // namespace glrr

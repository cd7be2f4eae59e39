#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glrr/io.hpp"
#include "glrr/parallel.hpp"
#include "glrr/pipeline.hpp"
#include "glrr/synth.hpp"

namespace fs = std::filesystem;
using namespace glrr;

namespace {

fs::path index_path_for(const fs::path& points_file) { return fs::path(points_file.string() + ".index.csv"); }

int cmd_synth(const SyntheticSpec& spec, const fs::path& out) {
  const auto groups = synth_groups(spec);
  std::ostringstream labels;
  labels << "group_id,label\n";
  for (const auto& g : groups) {
    io::save_gmat(out / (g.id + ".gmat"), g.samples);
    labels << g.id << ',' << g.label << '\n';
  }
  io::save_text(out / "labels.csv", labels.str());
  std::cout << "wrote " << groups.size() << " groups to " << out.string() << '\n';
  return 0;
}

int cmd_points(const fs::path& in, const std::string& format, int p, const fs::path& out) {
  const auto groups = load_dataset(in, parse_dataset_format(format));
  const auto points = points_from_groups(groups, p);
  std::vector<Matrix> bases;
  bases.reserve(points.size());
  for (const auto& x : points) bases.push_back(x.basis());
  io::save_gmat_stack(out, bases);
  std::ostringstream index;
  index << "index,group_id,label\n";
  for (std::size_t i = 0; i < groups.size(); ++i) index << i << ',' << groups[i].id << ',' << groups[i].label << '\n';
  io::save_text(index_path_for(out), index.str());
  std::cout << "wrote " << points.size() << " points on G(" << p << ", " << bases.front().rows() << ") to "
            << out.string() << '\n';
  return 0;
}

int cmd_cluster(const fs::path& points_file, const ClusterOptions& options, const fs::path& out) {
  std::vector<GrassmannPoint> points;
  for (auto& m : io::load_gmat_stack(points_file)) points.push_back(GrassmannPoint::validate(std::move(m), 1e-8));
  const ClusterOutcome result = cluster_points(points, options);

  fs::create_directories(out);
  io::save_gmat(out / "W.gmat", result.solve.w);
  io::save_labels(out / "labels.csv", result.labels.labels);
  std::ostringstream history;
  write_history_csv(history, result.solve.state.history);
  io::save_text(out / "history.csv", history.str());

  if (!result.solve.converged()) {
    std::cerr << "warning: solver stopped after " << result.solve.state.iteration
              << " iterations without meeting the stopping rule\n";
  }
  std::cout << "iterations " << result.solve.state.iteration << '\n';
  const fs::path index = index_path_for(points_file);
  if (fs::exists(index)) {
    const auto table = io::load_csv_table(index);
    std::vector<int> raw;
    for (const auto& row : table.rows) raw.push_back(std::stoi(row.at(2)));
    io::save_labels(out / "truth.csv", raw);
    ClusterAssignment truth{raw, 0};
    std::cout << "accuracy " << std::setprecision(6) << accuracy(result.labels, truth) << '\n';
  }
  return 0;
}

int cmd_eval(const fs::path& pred_file, const fs::path& truth_file, bool table) {
  const ClusterAssignment pred{io::load_labels(pred_file), 0};
  const ClusterAssignment truth{io::load_labels(truth_file), 0};
  std::cout << std::setprecision(6) << accuracy(pred, truth) << '\n';
  if (table) print_contingency(std::cout, contingency_table(pred, truth));
  return 0;
}

int cmd_run(const fs::path& config_file) {
  const PipelineConfig config = load_config(config_file);
  const Report report = run_pipeline(config);
  if (!report.outcome.solve.converged()) {
    std::cerr << "warning: solver stopped at max_iters without meeting the stopping rule\n";
  }
  std::cout << "accuracy " << std::setprecision(6) << report.accuracy << '\n';
  std::cout << "run directory " << report.run_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank representation clustering of subspaces on the Grassmann manifold"};
  app.require_subcommand(1);

  SyntheticSpec spec;
  fs::path synth_out;
  auto* synth = app.add_subcommand("synth", "write synthetic GMAT groups and labels.csv");
  synth->add_option("--k", spec.k, "clusters")->required();
  synth->add_option("--per-cluster", spec.per_cluster, "points per cluster")->required();
  synth->add_option("--d", spec.d, "ambient dimension")->required();
  synth->add_option("--p", spec.p, "subspace dimension")->required();
  synth->add_option("--noise", spec.noise, "perturbation scale")->required();
  synth->add_option("--seed", spec.seed, "random seed")->required();
  synth->add_option("--out", synth_out, "output directory")->required();

  fs::path points_in, points_out;
  int points_p = 10;
  std::string points_format = "gmat-dir";
  auto* points = app.add_subcommand("points", "build Grassmann points from image-set groups");
  points->add_option("--in", points_in, "dataset directory")->required();
  points->add_option("--p", points_p, "subspace dimension");
  points->add_option("--format", points_format, "gmat-dir | csv-dir | idx-grouped");
  points->add_option("--out", points_out, "output GMAT stack")->required();

  fs::path cluster_points_file, cluster_out;
  ClusterOptions cluster_opts;
  std::string variant = "njw";
  auto* cluster = app.add_subcommand("cluster", "Gram tensor, solve and spectral clustering");
  cluster->add_option("--points", cluster_points_file, "GMAT stack from `points`")->required();
  cluster->add_option("--lambda", cluster_opts.solver.lambda, "nuclear-norm weight")->required();
  cluster->add_option("--k", cluster_opts.k, "cluster count")->required();
  cluster->add_option("--seed", cluster_opts.seed, "k-means seed");
  cluster->add_option("--variant", variant, "njw | shi-malik");
  cluster->add_option("--max-iters", cluster_opts.solver.max_iters, "solver iteration cap");
  cluster->add_option("--out", cluster_out, "output directory")->required();

  fs::path pred_file, truth_file;
  bool show_table = false;
  auto* eval = app.add_subcommand("eval", "Hungarian-matched accuracy of two label files");
  eval->add_option("--pred", pred_file, "predicted labels CSV")->required();
  eval->add_option("--truth", truth_file, "true labels CSV")->required();
  eval->add_flag("--table", show_table, "print the contingency table");

  fs::path config_file;
  auto* run = app.add_subcommand("run", "full pipeline from a config file");
  run->add_option("--config", config_file, "key = value config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    configure_threads_from_env();
    if (*synth) return cmd_synth(spec, synth_out);
    if (*points) return cmd_points(points_in, points_format, points_p, points_out);
    if (*cluster) {
      cluster_opts.spectral.variant = parse_spectral_variant(variant);
      return cmd_cluster(cluster_points_file, cluster_opts, cluster_out);
    }
    if (*eval) return cmd_eval(pred_file, truth_file, show_table);
    if (*run) return cmd_run(config_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

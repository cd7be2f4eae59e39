#include <doctest.h>

#include <filesystem>

#include "glrr/config.hpp"
#include "glrr/dataset.hpp"
#include "glrr/io.hpp"
#include "glrr/pipeline.hpp"
#include "glrr/synth.hpp"
#include "test_support.hpp"

using namespace glrr;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "glrr_test_pipeline" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Validation;
}

}  // namespace

TEST_CASE("synthetic generator") {
  SyntheticSpec spec;
  spec.k = 3;
  spec.per_cluster = 10;
  spec.d = 20;
  spec.p = 3;

  SUBCASE("zero noise collapses each cluster to one subspace") {
    spec.noise = 0.0;
    const auto data = synth_grassmann(spec);
    REQUIRE(data.points.size() == 30);
    for (int c = 0; c < 3; ++c) {
      for (int i = 1; i < 10; ++i) CHECK(geodesic_distance(data.points[c * 10], data.points[c * 10 + i]) < 1e-7);
    }
  }
  SUBCASE("small noise keeps clusters apart") {
    spec.noise = 0.05;
    const auto data = synth_grassmann(spec);
    double within = 0.0, between = 0.0;
    int nw = 0, nb = 0;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      for (std::size_t j = i + 1; j < data.points.size(); ++j) {
        const double dist = geodesic_distance(data.points[i], data.points[j]);
        if (data.truth.labels[i] == data.truth.labels[j]) {
          within += dist;
          ++nw;
        } else {
          between += dist;
          ++nb;
        }
      }
    }
    CHECK(within / nw < between / nb);
  }
  SUBCASE("same seed, same bases") {
    const auto a = synth_grassmann(spec);
    const auto b = synth_grassmann(spec);
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].basis() == b.points[i].basis());
    CHECK(a.truth.labels == b.truth.labels);
  }
  SUBCASE("shape errors") {
    spec.p = 30;
    CHECK(kind_of([&] { synth_grassmann(spec); }) == ErrorKind::Shape);
  }
}

TEST_CASE("load_dataset: gmat-dir") {
  const auto dir = fresh_dir("gmat");
  std::mt19937_64 rng(1);
  io::save_gmat(dir / "a.gmat", glrr::testing::gaussian(784, 20, rng));
  io::save_gmat(dir / "b.gmat", glrr::testing::gaussian(784, 20, rng));
  io::save_text(dir / "labels.csv", "group_id,label\na,0\nb,1\n");
  const auto groups = load_dataset(dir, DatasetFormat::GmatDir);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].id == "a");
  CHECK(groups[1].label == 1);
  CHECK(groups[0].samples.rows() == 784);
  CHECK(groups[0].samples.cols() == 20);

  io::save_gmat(dir / "c.gmat", glrr::testing::gaussian(100, 20, rng));
  io::save_text(dir / "labels.csv", "group_id,label\na,0\nb,1\nc,1\n");
  CHECK(kind_of([&] { load_dataset(dir, DatasetFormat::GmatDir); }) == ErrorKind::Format);

  fs::remove(dir / "c.gmat");
  io::save_text(dir / "labels.csv", "group_id,label\na,0\n");
  CHECK(kind_of([&] { load_dataset(dir, DatasetFormat::GmatDir); }) == ErrorKind::MissingLabels);
  fs::remove(dir / "labels.csv");
  CHECK(kind_of([&] { load_dataset(dir, DatasetFormat::GmatDir); }) == ErrorKind::MissingLabels);
  CHECK(kind_of([&] { load_dataset(dir / "nope", DatasetFormat::GmatDir); }) == ErrorKind::Io);
}

TEST_CASE("load_dataset: csv-dir") {
  const auto dir = fresh_dir("csv");
  io::save_csv_matrix(dir / "g1.csv", Matrix::Identity(5, 2));
  io::save_csv_matrix(dir / "g2.csv", Matrix::Ones(5, 3));
  io::save_text(dir / "labels.csv", "group_id,label\ng1,4\ng2,7\n");
  const auto groups = load_dataset(dir, DatasetFormat::CsvDir);
  REQUIRE(groups.size() == 2);
  CHECK(groups[1].samples == Matrix::Ones(5, 3));
  CHECK(groups[0].label == 4);
}

TEST_CASE("load_dataset: idx-grouped vectorizes pixel (r, c) to r*n + c") {
  const auto dir = fresh_dir("idx");
  // Three 2x3 images with distinct byte values.
  const std::vector<std::vector<std::uint8_t>> images{
      {1, 2, 3, 4, 5, 6}, {10, 20, 30, 40, 50, 60}, {7, 8, 9, 250, 251, 252}};
  write_idx3_images(dir / "images-idx3-ubyte", images, 2, 3);
  io::save_text(dir / "groups.csv", "image_index,group_id\n0,x\n2,x\n1,y\n");
  io::save_text(dir / "labels.csv", "group_id,label\nx,0\ny,1\n");
  const auto groups = load_dataset(dir, DatasetFormat::IdxGrouped);
  REQUIRE(groups.size() == 2);

  Matrix expected_x(6, 2);
  expected_x << 1, 7, 2, 8, 3, 9, 4, 250, 5, 251, 6, 252;
  CHECK(groups[0].id == "x");
  CHECK(groups[0].samples == expected_x);
  Matrix expected_y(6, 1);
  expected_y << 10, 20, 30, 40, 50, 60;
  CHECK(groups[1].samples == expected_y);

  io::save_text(dir / "groups.csv", "image_index,group_id\n9,x\n");
  CHECK(kind_of([&] { load_dataset(dir, DatasetFormat::IdxGrouped); }) == ErrorKind::Format);
  io::save_text(dir / "images-idx3-ubyte", "junk-bytes-here!");
  CHECK(kind_of([&] { load_dataset(dir, DatasetFormat::IdxGrouped); }) == ErrorKind::Format);
}

TEST_CASE("random class subgroups") {
  Matrix images(4, 12);
  for (Eigen::Index i = 0; i < 12; ++i) images.col(i).setConstant(static_cast<double>(i));
  const std::vector<int> labels{0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  const auto groups = random_class_subgroups(images, labels, 2, 3, 5);
  REQUIRE(groups.size() == 4);
  for (const auto& g : groups) {
    CHECK(g.samples.cols() == 3);
    for (Eigen::Index c = 0; c < 3; ++c) CHECK(labels[static_cast<std::size_t>(g.samples(0, c))] == g.label);
  }
  // Two groups of the same class never share an image.
  for (Eigen::Index a = 0; a < 3; ++a) {
    for (Eigen::Index b = 0; b < 3; ++b) CHECK(groups[0].samples(0, a) != groups[1].samples(0, b));
  }
  const auto again = random_class_subgroups(images, labels, 2, 3, 5);
  CHECK(again[3].samples == groups[3].samples);
  CHECK_THROWS_AS(random_class_subgroups(images, labels, 3, 3, 5), Error);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
# comment
preset = mnist
k = 4
out = "some dir"
[solver]
eps1 = 1e-5
[spectral]
variant = shi-malik
seed = 9
)");
  CHECK(cfg.solver.lambda == 0.3);
  CHECK(cfg.p == 10);
  CHECK(cfg.k == 4);
  CHECK(cfg.solver.eps1 == 1e-5);
  CHECK(cfg.spectral_variant == SpectralVariant::ShiMalik);
  CHECK(cfg.spectral_seed == 9);
  CHECK(cfg.out_dir == fs::path("some dir"));
  CHECK(cfg.synth.p == 10);
  CHECK(cfg.synth.k == 4);

  CHECK(parse_config("preset = dyntex\n").solver.lambda == 0.8);
  CHECK(parse_config("preset = dyntex\nlambda = 0.5\n").solver.lambda == 0.5);
  CHECK(kind_of([] { parse_config("k = 1\n").validate(); }) == ErrorKind::Validation);
  CHECK(kind_of([] { parse_config("bogus = 1\n"); }) == ErrorKind::Validation);
  CHECK(kind_of([] { parse_config("k = three\n"); }) == ErrorKind::Validation);
  CHECK(kind_of([] { parse_config("just words\n"); }) == ErrorKind::Validation);
  CHECK(kind_of([] { parse_config("source = dataset\n").validate(); }) == ErrorKind::Validation);
}

TEST_CASE("run_pipeline on noiseless synthetic clusters") {
  const auto out = fresh_dir("run");
  PipelineConfig cfg = parse_config(
      "source = synthetic\np = 3\nk = 3\nlambda = 0.5\ntimestamped = false\n"
      "synth.per_cluster = 6\nsynth.d = 15\nsynth.noise = 0\nsynth.seed = 4\n");
  cfg.out_dir = out;
  const Report report = run_pipeline(cfg);
  CHECK(report.accuracy == 1.0);
  CHECK(report.n_points == 18);
  CHECK(report.outcome.solve.converged());
  for (const char* f : {"config.toml", "report.json", "W.gmat", "labels.csv", "truth.csv", "history.csv"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
  CHECK((io::load_gmat(out / "W.gmat") - report.outcome.solve.w).norm() == 0.0);
  CHECK(io::load_labels(out / "labels.csv") == report.outcome.labels.labels);
  CHECK(io::load_text(out / "report.json").find("\"schema_version\": 1") != std::string::npos);

  const Report again = run_pipeline(cfg);
  CHECK(again.outcome.labels.labels == report.outcome.labels.labels);
  CHECK(again.accuracy == report.accuracy);
}

TEST_CASE("stage failures name the stage") {
  std::vector<GrassmannPoint> pts{GrassmannPoint::validate(Matrix::Identity(4, 2)),
                                  GrassmannPoint::validate(Matrix::Identity(4, 2))};
  Matrix far = Matrix::Zero(4, 2);
  far(2, 0) = 1.0;
  far(3, 1) = 1.0;
  pts.push_back(GrassmannPoint::validate(far));
  ClusterOptions options;
  options.k = 2;
  try {
    cluster_points(pts, options);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LogUndefined);
    CHECK(std::string(e.what()).find("stage 'gram'") != std::string::npos);
    CHECK(exit_code_for(e.kind()) == 3);
  }
}

// Serial reference vs OpenMP kernels. Thread count follows GLRR_THREADS /
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "glrr/clustering.hpp"
#include "glrr/gram.hpp"
#include "glrr/parallel.hpp"
#include "glrr/solver.hpp"
#include "glrr/synth.hpp"

namespace {

std::vector<glrr::GrassmannPoint> points_for(benchmark::State& state) {
  glrr::SyntheticSpec spec;
  spec.k = 4;
  spec.per_cluster = static_cast<int>(state.range(0)) / 4;
  spec.d = 100;
  spec.p = 10;
  spec.noise = 0.05;
  return glrr::synth_grassmann(spec).points;
}

void BM_GramSerial(benchmark::State& state) {
  const auto pts = points_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(glrr::serial::build_gram(pts));
}

void BM_GramParallel(benchmark::State& state) {
  const auto pts = points_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(glrr::build_gram(pts));
}

void BM_GradientSerial(benchmark::State& state) {
  const auto b = glrr::build_gram(points_for(state));
  const auto n = static_cast<Eigen::Index>(b.n_points());
  const glrr::Matrix w = glrr::Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  const glrr::Vector y = glrr::Vector::Zero(n);
  for (auto _ : state) benchmark::DoNotOptimize(glrr::serial::gradient_f(w, b, y, 1.0));
}

void BM_GradientParallel(benchmark::State& state) {
  const auto b = glrr::build_gram(points_for(state));
  const auto n = static_cast<Eigen::Index>(b.n_points());
  const glrr::Matrix w = glrr::Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  const glrr::Vector y = glrr::Vector::Zero(n);
  for (auto _ : state) benchmark::DoNotOptimize(glrr::gradient_f(w, b, y, 1.0));
}

glrr::Matrix embedding_for(benchmark::State& state) {
  const auto n = state.range(0);
  glrr::Matrix x = glrr::Matrix::Random(n, 8);
  for (Eigen::Index i = 0; i < n; ++i) x(i, i % 8) += 4.0;
  return x;
}

void BM_KMeansSerial(benchmark::State& state) {
  const auto x = embedding_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(glrr::serial::kmeans(x, 8, 0));
}

void BM_KMeansParallel(benchmark::State& state) {
  const auto x = embedding_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(glrr::kmeans(x, 8, 0));
}

}  // namespace

BENCHMARK(BM_GramSerial)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(16)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientSerial)->Arg(40)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GradientParallel)->Arg(40)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KMeansSerial)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KMeansParallel)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  glrr::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}

#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "gpcons/kernels.hpp"

using namespace gpcons;
namespace ks = gpcons::kernels;

namespace {

Matrix uniform_points(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

GPModel model_with(Index points) {
  const Matrix X = uniform_points(points, 2, 1);
  Vector y(points);
  for (Index i = 0; i < points; ++i) y(i) = std::sin(X(i, 0)) * X(i, 1);
  return fit({X, y}, KernelParams::defaults(2));
}

template <Matrix (*Gram)(const KernelParams&, const Matrix&)>
void BM_gram(benchmark::State& state) {
  const Matrix X = uniform_points(state.range(0), 2, 2);
  const KernelParams p = KernelParams::defaults(2);
  for (auto _ : state) benchmark::DoNotOptimize(Gram(p, X));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <ks::BatchPrediction (*Predict)(const GPModel&, const Matrix&)>
void BM_predict_batch(benchmark::State& state) {
  const GPModel model = model_with(100);
  const Matrix Q = uniform_points(state.range(0), 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Predict(model, Q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <ks::LipschitzScan (*Scan)(const ks::Field&, Index, const Grid&)>
void BM_lipschitz_scan(benchmark::State& state) {
  const Grid grid(Box{Vector::Constant(2, -2.0), Vector::Constant(2, 2.0)}, state.range(0));
  const ks::Field field = [](const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out) {
    out(0) = 2.0 * x(1) * std::sin(x(0)) + std::sin(x(1));
    out(1) = x(0) * std::cos(0.2 * x(1) * x(1) + x(1)) + std::sin(x(0));
  };
  for (auto _ : state) benchmark::DoNotOptimize(Scan(field, 2, grid));
  state.SetItemsProcessed(state.iterations() * grid.size());
}

}  // namespace

BENCHMARK(BM_gram<ks::serial::gram>)->Name("gram/serial")->Arg(100)->Arg(400)->Arg(1000);
BENCHMARK(BM_gram<ks::omp::gram>)->Name("gram/omp")->Arg(100)->Arg(400)->Arg(1000)->UseRealTime();
BENCHMARK(BM_predict_batch<ks::serial::predict_batch>)->Name("predict_batch/serial")->Arg(1000)->Arg(40000);
BENCHMARK(BM_predict_batch<ks::omp::predict_batch>)->Name("predict_batch/omp")->Arg(1000)->Arg(40000)->UseRealTime();
BENCHMARK(BM_lipschitz_scan<ks::serial::lipschitz_scan>)->Name("lipschitz_scan/serial")->Arg(200)->Arg(1000);
BENCHMARK(BM_lipschitz_scan<ks::omp::lipschitz_scan>)->Name("lipschitz_scan/omp")->Arg(200)->Arg(1000)->UseRealTime();

BENCHMARK_MAIN();

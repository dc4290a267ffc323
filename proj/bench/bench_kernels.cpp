// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "atmos/kernels.hpp"

namespace k = atmos::kernels;
using atmos::kernels::cplx;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {g(rng), g(rng)};
    }
    return m;
}

std::vector<double> points(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = -0.999 + 1.998 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return x;
}

template <auto Fn>
void forward(benchmark::State& state) {
    const Eigen::VectorXcd v = random_matrix(state.range(0) + 1, 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(v));
}

template <auto Fn>
void product(benchmark::State& state) {
    const Eigen::VectorXcd v = random_matrix(state.range(0) + 1, 1, 2);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(v));
}

template <auto Fn>
void derivative(benchmark::State& state) {
    const Eigen::MatrixXcd x = random_matrix(state.range(0) + 1, state.range(0) + 1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(x));
}

template <auto Fn>
void series(benchmark::State& state) {
    const Eigen::MatrixXcd c = random_matrix(state.range(0) + 1, 100, 4);
    const auto x = points(351);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(c, x));
}

template <auto Fn>
void field(benchmark::State& state) {
    const auto m = state.range(0);
    Eigen::VectorXcd kr(m);
    for (Eigen::Index i = 0; i < m; ++i) kr[i] = {1.3 + 0.001 * static_cast<double>(i), 1e-4};
    const Eigen::VectorXcd src = random_matrix(m, 1, 5);
    const Eigen::MatrixXcd recv = random_matrix(351, m, 6);
    std::vector<double> r(500);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 10.0 * static_cast<double>(i + 1);
    for (auto _ : state) benchmark::DoNotOptimize(Fn(kr, src, recv, r));
}

}  // namespace

BENCHMARK(forward<k::reference::forward_transform>)->Name("forward_transform/serial")->Arg(600)->Arg(1500);
BENCHMARK(forward<k::forward_transform>)->Name("forward_transform/omp")->Arg(600)->Arg(1500);
BENCHMARK(product<k::reference::tau_product_matrix>)->Name("tau_product/serial")->Arg(600)->Arg(1500);
BENCHMARK(product<k::tau_product_matrix>)->Name("tau_product/omp")->Arg(600)->Arg(1500);
BENCHMARK(derivative<k::reference::tau_derivative_left>)->Name("tau_derivative_left/serial")->Arg(600);
BENCHMARK(derivative<k::tau_derivative_left>)->Name("tau_derivative_left/omp")->Arg(600);
BENCHMARK(derivative<k::reference::tau_derivative_right>)->Name("tau_derivative_right/serial")->Arg(600);
BENCHMARK(derivative<k::tau_derivative_right>)->Name("tau_derivative_right/omp")->Arg(600);
BENCHMARK(series<k::reference::evaluate_series>)->Name("evaluate_series/serial")->Arg(600);
BENCHMARK(series<k::evaluate_series>)->Name("evaluate_series/omp")->Arg(600);
BENCHMARK(series<k::reference::evaluate_nodal>)->Name("evaluate_nodal/serial")->Arg(600);
BENCHMARK(series<k::evaluate_nodal>)->Name("evaluate_nodal/omp")->Arg(600);
BENCHMARK(field<k::reference::synthesize_field>)->Name("synthesize_field/serial")->Arg(550);
BENCHMARK(field<k::synthesize_field>)->Name("synthesize_field/omp")->Arg(550);
BENCHMARK_MAIN();

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qbs/analysis.hpp"
#include "qbs/kernels.hpp"

namespace {

std::vector<qbs::Complex> uniform_state(int qubits) {
  const std::size_t size = std::size_t{1} << qubits;
  return std::vector<qbs::Complex>(size, 1.0 / std::sqrt(double(size)));
}

const qbs::Matrix2c kOperator{{{0.849549077650853, 0.0},
                               {0.0, 0.527509587270776}}};

template <auto Kernel>
void BM_apply_single_qubit(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  auto amps = uniform_state(qubits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Kernel(amps, qbs::kernels::qubit_stride(qubits, qubits - 1), kOperator));
  }
  state.SetItemsProcessed(state.iterations() * int64_t(amps.size()));
}

template <auto Kernel>
void BM_norm_squared(benchmark::State& state) {
  const auto amps = uniform_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(amps));
  state.SetItemsProcessed(state.iterations() * int64_t(amps.size()));
}

void BM_partial_hadamard_serial(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  std::vector<qbs::Complex> amps(std::size_t{1} << qubits);
  for (auto _ : state) {
    std::fill(amps.begin(), amps.end(), qbs::Complex{});
    amps[0] = 1.0;
    qbs::kernels::serial::partial_hadamard(amps, qubits, 1, qubits);
    benchmark::ClobberMemory();
  }
}

void BM_partial_hadamard_parallel(benchmark::State& state) {
  const int qubits = static_cast<int>(state.range(0));
  std::vector<qbs::Complex> amps(std::size_t{1} << qubits);
  for (auto _ : state) {
    amps[0] = 1.0;
    qbs::kernels::parallel::partial_hadamard(amps, qubits, 1, qubits, 0);
    benchmark::ClobberMemory();
  }
}

void BM_monte_carlo(benchmark::State& state, bool parallel) {
  const auto plan = qbs::make_plan(16);
  const auto x = qbs::second_register_model(16, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        parallel ? qbs::monte_carlo_chain(plan, x, 100000, 1)
                 : qbs::monte_carlo_chain_serial(plan, x, 100000, 1));
  }
}

}  // namespace

BENCHMARK(BM_apply_single_qubit<qbs::kernels::serial::apply_single_qubit>)
    ->Name("apply_single_qubit/serial")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_apply_single_qubit<qbs::kernels::parallel::apply_single_qubit>)
    ->Name("apply_single_qubit/parallel")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_norm_squared<qbs::kernels::serial::norm_squared>)
    ->Name("norm_squared/serial")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_norm_squared<qbs::kernels::parallel::norm_squared>)
    ->Name("norm_squared/parallel")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_partial_hadamard_serial)->Name("partial_hadamard/serial")->Arg(16)->Arg(20);
BENCHMARK(BM_partial_hadamard_parallel)->Name("partial_hadamard/parallel")->Arg(16)->Arg(20);
BENCHMARK_CAPTURE(BM_monte_carlo, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_monte_carlo, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

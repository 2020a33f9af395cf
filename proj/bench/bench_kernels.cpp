// Serial reference kernels vs the OpenMP versions.
//   bench_kernels --benchmark_filter=moments
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <numeric>

#include "qsre/haar_ref.hpp"
#include "qsre/hamiltonian.hpp"
#include "qsre/kernels.hpp"

using namespace qsre;
namespace ks = kernels::serial;
namespace kp = kernels::parallel;

namespace {

std::vector<cplx> random_amplitudes(int n) {
  const auto psi = sample_haar_state(std::min(n, 12), 17);
  if (n <= 12) return {psi.amplitudes().begin(), psi.amplitudes().end()};
  // tile a 12-qubit state for larger registers
  std::vector<cplx> out(std::size_t{1} << n);
  const double s = std::sqrt(std::ldexp(1.0, 12 - n));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = psi[i & 0xfff] * s;
  return out;
}

void moments_serial(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto psi = random_amplitudes(n);
  for (auto _ : st) benchmark::DoNotOptimize(ks::pauli_moments(psi, n, 2, false));
}

void moments_parallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto psi = random_amplitudes(n);
  for (auto _ : st) benchmark::DoNotOptimize(kp::pauli_moments(psi, n, 2, false));
}

template <bool Parallel>
void rdm(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto psi = random_amplitudes(n);
  std::vector<int> region(static_cast<std::size_t>(n / 2));
  std::iota(region.begin(), region.end(), 0);
  for (auto _ : st) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(kp::reduced_density_matrix(psi, n, region));
    else
      benchmark::DoNotOptimize(ks::reduced_density_matrix(psi, n, region));
  }
}

template <bool Parallel>
void hamiltonian_apply(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto h = build_tfim_l(n, 1.0, 1.5, 0.5);
  const auto terms = h.term_views();
  const auto psi = random_amplitudes(n);
  std::vector<cplx> out(psi.size());
  const kp::CompiledPauliSum compiled(n, terms);
  for (auto _ : st) {
    if constexpr (Parallel)
      compiled.apply(psi, out);
    else
      ks::apply_pauli_sum(terms, psi, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void two_qubit_gate(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  auto psi = random_amplitudes(n);
  const Eigen::Matrix4cd g = Eigen::Matrix4cd::Identity();
  for (auto _ : st) {
    for (int j = 0; j + 1 < n; ++j) {
      if constexpr (Parallel)
        kp::apply_two_qubit(psi, j, j + 1, g);
      else
        ks::apply_two_qubit(psi, j, j + 1, g);
    }
    benchmark::DoNotOptimize(psi.data());
  }
}

}  // namespace

BENCHMARK(moments_serial)->DenseRange(6, 9, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(moments_parallel)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(rdm<false>)->Name("rdm_serial")->DenseRange(10, 16, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(rdm<true>)->Name("rdm_parallel")->DenseRange(10, 16, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(hamiltonian_apply<false>)->Name("hamiltonian_serial")->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(hamiltonian_apply<true>)->Name("hamiltonian_parallel")->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(two_qubit_gate<false>)->Name("gates_serial")->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(two_qubit_gate<true>)->Name("gates_parallel")->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

#include <cmath>
#include <cstdint>

#ifdef QBS_HAVE_OPENMP
#include <omp.h>
#endif

#include "qbs/kernels.hpp"

namespace qbs::kernels::parallel {

namespace {

// Below this many amplitudes thread start-up costs more than the loop.
constexpr std::int64_t kMinParallel = 1 << 14;

}  // namespace

double norm_squared(std::span<const Complex> amps) {
  const auto size = static_cast<std::int64_t>(amps.size());
  double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum) if (size >= kMinParallel)
  for (std::int64_t i = 0; i < size; ++i) sum += std::norm(amps[i]);
  return sum;
}

double apply_single_qubit(std::span<Complex> amps, std::size_t stride,
                          const Matrix2c& op) {
  // Iterate over the half-size index space of pair leaders so the loop is
  // flat regardless of which qubit is targeted.
  const auto pairs = static_cast<std::int64_t>(amps.size() / 2);
  const auto s = static_cast<std::int64_t>(stride);
  double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum) if (pairs >= kMinParallel)
  for (std::int64_t p = 0; p < pairs; ++p) {
    const std::int64_t lo_index = (p / s) * 2 * s + (p % s);
    const Complex lo = amps[lo_index];
    const Complex hi = amps[lo_index + s];
    const Complex new_lo = op[0][0] * lo + op[0][1] * hi;
    const Complex new_hi = op[1][0] * lo + op[1][1] * hi;
    amps[lo_index] = new_lo;
    amps[lo_index + s] = new_hi;
    sum += std::norm(new_lo) + std::norm(new_hi);
  }
  return sum;
}

double bit_probability(std::span<const Complex> amps, std::size_t stride) {
  const auto size = static_cast<std::int64_t>(amps.size());
  const auto s = static_cast<std::int64_t>(stride);
  double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum) if (size >= kMinParallel)
  for (std::int64_t i = 0; i < size; ++i) {
    if (i & s) sum += std::norm(amps[i]);
  }
  return sum;
}

void scale(std::span<Complex> amps, double factor) {
  const auto size = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (size >= kMinParallel)
  for (std::int64_t i = 0; i < size; ++i) amps[i] *= factor;
}

void project(std::span<Complex> amps, std::size_t stride, int outcome,
             double factor) {
  const auto size = static_cast<std::int64_t>(amps.size());
  const auto s = static_cast<std::int64_t>(stride);
  const std::int64_t want = outcome ? s : 0;
#pragma omp parallel for schedule(static) if (size >= kMinParallel)
  for (std::int64_t i = 0; i < size; ++i) {
    if ((i & s) == want) {
      amps[i] *= factor;
    } else {
      amps[i] = 0.0;
    }
  }
}

void partial_hadamard(std::span<Complex> amps, int qubit_count, int first,
                      int end, std::uint64_t basis) {
  const Complex phase = amps[basis];
  const int free_bits = end - first;
  const int shift = qubit_count - end;
  const Complex value = phase / std::sqrt(std::ldexp(1.0, free_bits));
  const auto size = static_cast<std::int64_t>(amps.size());
  const auto block = static_cast<std::int64_t>(std::int64_t{1} << free_bits);

#pragma omp parallel for schedule(static) if (size >= kMinParallel)
  for (std::int64_t i = 0; i < size; ++i) amps[i] = 0.0;

#pragma omp parallel for schedule(static) if (block >= kMinParallel)
  for (std::int64_t suffix = 0; suffix < block; ++suffix) {
    amps[basis | (static_cast<std::uint64_t>(suffix) << shift)] = value;
  }
}

int max_threads() {
#ifdef QBS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qbs::kernels::parallel

#include <cmath>

#include "qbs/kernels.hpp"

namespace qbs::kernels::serial {

double norm_squared(std::span<const Complex> amps) {
  double sum = 0.0;
  for (const Complex& a : amps) sum += std::norm(a);
  return sum;
}

double apply_single_qubit(std::span<Complex> amps, std::size_t stride,
                          const Matrix2c& op) {
  double sum = 0.0;
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex lo = amps[i];
      const Complex hi = amps[i + stride];
      amps[i] = op[0][0] * lo + op[0][1] * hi;
      amps[i + stride] = op[1][0] * lo + op[1][1] * hi;
      sum += std::norm(amps[i]) + std::norm(amps[i + stride]);
    }
  }
  return sum;
}

double bit_probability(std::span<const Complex> amps, std::size_t stride) {
  double sum = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & stride) sum += std::norm(amps[i]);
  }
  return sum;
}

void scale(std::span<Complex> amps, double factor) {
  for (Complex& a : amps) a *= factor;
}

void project(std::span<Complex> amps, std::size_t stride, int outcome,
             double factor) {
  const std::size_t want = outcome ? stride : 0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & stride) == want) {
      amps[i] *= factor;
    } else {
      amps[i] = 0.0;
    }
  }
}

void partial_hadamard(std::span<Complex> amps, int qubit_count, int first,
                      int end) {
  const double h = 1.0 / std::sqrt(2.0);
  const Matrix2c hadamard{{{h, h}, {h, -h}}};
  for (int q = first; q < end; ++q) {
    apply_single_qubit(amps, qubit_stride(qubit_count, q), hadamard);
  }
}

}  // namespace qbs::kernels::serial

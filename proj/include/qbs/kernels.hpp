#pragma once

// Dense amplitude-vector kernels used by QuantumState.
//
// Two implementations share one interface: `serial` is the plain-loop
// reference kept for testing and benchmarking, `parallel` spreads the same
// loops over OpenMP threads (and falls back to serial loops when the library
// is built without OpenMP). Bit strides follow the register convention:
// in an m-qubit register, qubit q owns bit (m - 1 - q) of the basis index.

#include <cstddef>
#include <cstdint>
#include <span>

#include "qbs/types.hpp"

namespace qbs::kernels {

inline std::size_t qubit_stride(int qubit_count, int qubit) {
  return std::size_t{1} << (qubit_count - 1 - qubit);
}

namespace serial {

double norm_squared(std::span<const Complex> amps);

// Applies `op` to the qubit with the given stride; returns the squared norm
// of the result.
double apply_single_qubit(std::span<Complex> amps, std::size_t stride,
                          const Matrix2c& op);

// Total probability of the qubit with the given stride reading 1.
double bit_probability(std::span<const Complex> amps, std::size_t stride);

void scale(std::span<Complex> amps, double factor);

// Zeroes every component whose qubit differs from `outcome`, multiplies the
// rest by `factor`.
void project(std::span<Complex> amps, std::size_t stride, int outcome,
             double factor);

// Hadamard on qubits [first, end), one gate at a time. Valid for any input.
void partial_hadamard(std::span<Complex> amps, int qubit_count, int first,
                      int end);

}  // namespace serial

namespace parallel {

double norm_squared(std::span<const Complex> amps);
double apply_single_qubit(std::span<Complex> amps, std::size_t stride,
                          const Matrix2c& op);
double bit_probability(std::span<const Complex> amps, std::size_t stride);
void scale(std::span<Complex> amps, double factor);
void project(std::span<Complex> amps, std::size_t stride, int outcome,
             double factor);

// Hadamard on qubits [first, end) for a basis-state input whose qubits in
// that range are all 0: writes the uniform block directly instead of
// applying gates. `basis` is the index of the single nonzero amplitude.
void partial_hadamard(std::span<Complex> amps, int qubit_count, int first,
                      int end, std::uint64_t basis);

int max_threads();

}  // namespace parallel

}  // namespace qbs::kernels

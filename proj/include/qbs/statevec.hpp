#pragma once

// Dense state vector for the index register plus (optionally) the one-qubit
// flag register. Qubit 0 is the most significant bit of the basis index; when
// the flag qubit is present it is the last qubit, i.e. the least significant
// bit.

#include <cstdint>
#include <span>
#include <vector>

#include "qbs/types.hpp"

namespace qbs {

class OracleSpec;
struct OperatorResult;
struct MeasurementResult;

class QuantumState {
 public:
  // |0...0> on `qubit_count` qubits.
  explicit QuantumState(int qubit_count);

  static QuantumState basis(int qubit_count, std::uint64_t index);

  // Takes ownership of `amplitudes`; length must be 2^qubit_count and the
  // vector must be normalized within 1e-10.
  static QuantumState from_amplitudes(int qubit_count,
                                      std::vector<Complex> amplitudes);

  int qubit_count() const noexcept { return qubit_count_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(std::uint64_t index) const { return amplitudes_.at(index); }
  double norm_squared() const;

  friend QuantumState append_flag_qubit(QuantumState state);
  friend QuantumState apply_partial_hadamard(QuantumState state,
                                             int fixed_count, int end);
  friend QuantumState apply_oracle(QuantumState state,
                                   OracleSpec& oracle);
  friend OperatorResult apply_qubit_operator(QuantumState state,
                                                    int qubit,
                                                    const Matrix2c& op,
                                                    bool renormalize);
  friend MeasurementResult measure_qubit(QuantumState state, int qubit,
                                                Rng& rng);

 private:
  QuantumState(int qubit_count, std::vector<Complex> amplitudes);

  int qubit_count_;
  std::vector<Complex> amplitudes_;
};

// Hidden target t over 2^n items. f(i) = 1 iff i == t.
class OracleSpec {
 public:
  static constexpr int kMaxIndexQubits = 30;

  OracleSpec(int n, std::uint64_t target);

  int n() const noexcept { return n_; }
  std::uint64_t target() const noexcept { return target_; }
  std::uint64_t query_count() const noexcept { return query_count_; }
  bool recognizes(std::uint64_t index) const noexcept {
    return index == target_;
  }
  void record_query() noexcept { ++query_count_; }

 private:
  int n_;
  std::uint64_t target_;
  std::uint64_t query_count_ = 0;
};

struct OperatorResult {
  QuantumState state;
  double success_probability;
};

struct MeasurementResult {
  int outcome;
  QuantumState collapsed;
};

// |b_0 ... b_{j-1} 0 ... 0> on n qubits.
QuantumState prepare_prefix_state(std::span<const std::uint8_t> determined_bits,
                                   int n);

// |i> -> |i>|0>.
QuantumState append_flag_qubit(QuantumState state);

// Identity on qubits [0, fixed_count), Hadamard on [fixed_count, end).
// Requires a basis state whose qubits in [fixed_count, end) are all 0;
// `end` < 0 means every remaining qubit.
QuantumState apply_partial_hadamard(QuantumState state, int fixed_count,
                                    int end = -1);

// |i>|q> -> |i>|q xor f(i)> on an (n+1)-qubit state; counts one query.
QuantumState apply_oracle(QuantumState state, OracleSpec& oracle);

// Applies `op` to one qubit and reports <psi|(I x op^dag op)|psi>. With
// `renormalize` the result is divided by its norm (selective measurement
// update); without it the operator must preserve the norm.
OperatorResult apply_qubit_operator(QuantumState state, int qubit,
                                    const Matrix2c& op, bool renormalize);

MeasurementResult measure_qubit(QuantumState state, int qubit, Rng& rng);

double qubit_one_probability(const QuantumState& state, int qubit);

// Samples a full computational-basis readout without collapsing `state`.
std::uint64_t sample_basis(const QuantumState& state, Rng& rng);

}  // namespace qbs

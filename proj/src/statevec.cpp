#include "qbs/statevec.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qbs/errors.hpp"
#include "qbs/kernels.hpp"

namespace qbs {

namespace kp = kernels::parallel;

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kZeroProbability = 1e-300;
constexpr int kMaxQubits = OracleSpec::kMaxIndexQubits + 1;

void check_qubit_count(int qubit_count) {
  if (qubit_count < 1 || qubit_count > kMaxQubits) {
    throw Error(ErrorCode::resource_limit,
                "qubit count " + std::to_string(qubit_count) +
                    " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
}

void check_qubit(const QuantumState& state, int qubit) {
  if (qubit < 0 || qubit >= state.qubit_count()) {
    throw Error(ErrorCode::invalid_argument,
                "qubit " + std::to_string(qubit) + " out of range for " +
                    std::to_string(state.qubit_count()) + "-qubit state");
  }
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_prefix: return "invalid-prefix";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::zero_probability_branch: return "zero-probability-branch";
    case ErrorCode::invalid_size: return "invalid-size";
    case ErrorCode::singular_matrix: return "singular-matrix";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::target_not_found: return "target-not-found";
    case ErrorCode::restart_budget_exhausted: return "restart-budget-exhausted";
    case ErrorCode::resource_limit: return "resource-limit";
  }
  return "unknown";
}

QuantumState::QuantumState(int qubit_count) : qubit_count_(qubit_count) {
  check_qubit_count(qubit_count);
  amplitudes_.assign(std::size_t{1} << qubit_count, Complex{});
  amplitudes_[0] = 1.0;
}

QuantumState::QuantumState(int qubit_count, std::vector<Complex> amplitudes)
    : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {}

QuantumState QuantumState::basis(int qubit_count, std::uint64_t index) {
  QuantumState state(qubit_count);
  if (index >= state.dimension()) {
    throw Error(ErrorCode::invalid_argument,
                "basis index " + std::to_string(index) + " out of range");
  }
  state.amplitudes_[0] = 0.0;
  state.amplitudes_[index] = 1.0;
  return state;
}

QuantumState QuantumState::from_amplitudes(int qubit_count,
                                           std::vector<Complex> amplitudes) {
  check_qubit_count(qubit_count);
  if (amplitudes.size() != (std::size_t{1} << qubit_count)) {
    throw Error(ErrorCode::dimension,
                "expected " + std::to_string(std::size_t{1} << qubit_count) +
                    " amplitudes, got " + std::to_string(amplitudes.size()));
  }
  const double norm = kp::norm_squared(amplitudes);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::precondition,
                "amplitudes are not normalized (norm^2 = " +
                    std::to_string(norm) + ")");
  }
  return QuantumState(qubit_count, std::move(amplitudes));
}

double QuantumState::norm_squared() const {
  return kp::norm_squared(amplitudes_);
}

OracleSpec::OracleSpec(int n, std::uint64_t target) : n_(n), target_(target) {
  if (n < 1 || n > kMaxIndexQubits) {
    throw Error(ErrorCode::invalid_argument,
                "index qubit count " + std::to_string(n) + " outside [1, " +
                    std::to_string(kMaxIndexQubits) + "]");
  }
  if (target >= (std::uint64_t{1} << n)) {
    throw Error(ErrorCode::invalid_argument,
                "target " + std::to_string(target) + " outside [0, 2^" +
                    std::to_string(n) + ")");
  }
}

QuantumState prepare_prefix_state(std::span<const std::uint8_t> determined_bits,
                                   int n) {
  if (determined_bits.size() > static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::invalid_prefix,
                "prefix of length " + std::to_string(determined_bits.size()) +
                    " exceeds " + std::to_string(n) + " qubits");
  }
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < determined_bits.size(); ++k) {
    if (determined_bits[k] > 1) {
      throw Error(ErrorCode::invalid_prefix, "prefix entries must be 0 or 1");
    }
    index |= std::uint64_t{determined_bits[k]} << (n - 1 - k);
  }
  return QuantumState::basis(n, index);
}

QuantumState append_flag_qubit(QuantumState state) {
  check_qubit_count(state.qubit_count_ + 1);
  std::vector<Complex> widened(state.dimension() * 2);
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    widened[i << 1] = state.amplitudes_[i];
  }
  return QuantumState(state.qubit_count_ + 1, std::move(widened));
}

QuantumState apply_partial_hadamard(QuantumState state, int fixed_count,
                                    int end) {
  const int m = state.qubit_count_;
  if (end < 0) end = m;
  if (fixed_count < 0 || fixed_count > end || end > m) {
    throw Error(ErrorCode::invalid_argument,
                "Hadamard range [" + std::to_string(fixed_count) + ", " +
                    std::to_string(end) + ") invalid for " +
                    std::to_string(m) + " qubits");
  }

  // Locate the single basis component; reject anything else.
  std::uint64_t basis = 0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (std::abs(state.amplitudes_[i]) > 1e-12) {
      basis = i;
      ++nonzero;
    }
  }
  if (nonzero != 1) {
    throw Error(ErrorCode::precondition,
                "partial Hadamard expects a computational basis state");
  }
  const int free_bits = end - fixed_count;
  const std::uint64_t free_mask =
      ((std::uint64_t{1} << free_bits) - 1) << (m - end);
  if (basis & free_mask) {
    throw Error(ErrorCode::precondition,
                "partial Hadamard expects the free qubits in |0>");
  }
  if (free_bits == 0) return state;
  kp::partial_hadamard(state.amplitudes_, m, fixed_count, end, basis);
  return state;
}

QuantumState apply_oracle(QuantumState state, OracleSpec& oracle) {
  if (state.qubit_count_ != oracle.n() + 1) {
    throw Error(ErrorCode::dimension,
                "oracle over " + std::to_string(oracle.n()) +
                    " index qubits needs a " + std::to_string(oracle.n() + 1) +
                    "-qubit state, got " + std::to_string(state.qubit_count_));
  }
  // Only |t>|0> and |t>|1> see f(i) = 1; every other component is fixed.
  const std::uint64_t base = oracle.target() << 1;
  std::swap(state.amplitudes_[base], state.amplitudes_[base | 1]);
  oracle.record_query();
  return state;
}

OperatorResult apply_qubit_operator(QuantumState state, int qubit,
                                    const Matrix2c& op, bool renormalize) {
  check_qubit(state, qubit);
  const double probability = kp::apply_single_qubit(
      state.amplitudes_, kernels::qubit_stride(state.qubit_count_, qubit), op);
  if (probability < kZeroProbability) {
    throw Error(ErrorCode::zero_probability_branch,
                "operator annihilates the state; branch has zero probability");
  }
  if (renormalize) {
    kp::scale(state.amplitudes_, 1.0 / std::sqrt(probability));
  } else if (std::abs(probability - 1.0) > kNormTolerance) {
    throw Error(ErrorCode::precondition,
                "operator is not norm preserving; request renormalization");
  }
  return OperatorResult{std::move(state), probability};
}

double qubit_one_probability(const QuantumState& state, int qubit) {
  check_qubit(state, qubit);
  return kp::bit_probability(state.amplitudes(),
                             kernels::qubit_stride(state.qubit_count(), qubit));
}

MeasurementResult measure_qubit(QuantumState state, int qubit, Rng& rng) {
  const double p1 = qubit_one_probability(state, qubit);
  const int outcome = uniform01(rng) < p1 ? 1 : 0;
  const double kept = outcome ? p1 : 1.0 - p1;
  kp::project(state.amplitudes_,
              kernels::qubit_stride(state.qubit_count_, qubit), outcome,
              1.0 / std::sqrt(kept));
  return MeasurementResult{outcome, std::move(state)};
}

std::uint64_t sample_basis(const QuantumState& state, Rng& rng) {
  const auto amps = state.amplitudes();
  double u = uniform01(rng);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    u -= std::norm(amps[i]);
    if (u < 0.0) return i;
  }
  // Rounding left a sliver of mass past the end; return the last populated
  // index.
  for (std::size_t i = amps.size(); i-- > 0;) {
    if (std::norm(amps[i]) > 0.0) return i;
  }
  return 0;
}

}  // namespace qbs

#pragma once

// Cost accounting for the subdivision search: closed-form and Monte Carlo
// chain success probabilities, expected restarts, baseline query counts, and
// an experiment that runs the chain on the full entangled register instead
// of the two-dimensional flag model.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qbs/differentiator.hpp"
#include "qbs/subdiv.hpp"
#include "qbs/types.hpp"

namespace qbs {

// c^(2v) for the plan of a sublist of M items: the mean number of chain
// attempts until one takes M0 at every step.
double expected_restarts(std::uint64_t sublist_size, int v);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t clean = 0;
};

// Trials are split into blocks of kMonteCarloBlock; block b draws from
// Rng(seed + b). The result does not depend on the thread count.
inline constexpr std::uint64_t kMonteCarloBlock = 4096;

MonteCarloEstimate monte_carlo_chain(const DifferentiatorPlan& plan,
                                     const TwoDimState& input,
                                     std::uint64_t trials, std::uint64_t seed);

// Single-threaded reference for monte_carlo_chain; identical results.
MonteCarloEstimate monte_carlo_chain_serial(const DifferentiatorPlan& plan,
                                            const TwoDimState& input,
                                            std::uint64_t trials,
                                            std::uint64_t seed);

// (pi/4) sqrt(N) Grover iterations.
double grover_baseline(std::uint64_t list_size);

struct JointModeConfig {
  int n = 3;
  std::uint64_t target = 0;
  Bits prefix;  // fixed leading bits selecting the sublist
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  ChainMode mode = ChainMode::forced;
  std::optional<int> v_override;
};

struct JointModeReport {
  int n = 0;
  std::uint64_t target = 0;
  std::uint64_t sublist_size = 0;
  bool target_in_sublist = false;
  int v = 0;
  std::uint64_t trials = 0;
  ChainMode mode = ChainMode::forced;

  // Flag register before the chain.
  double pre_chain_flag_probability = 0.0;
  double pre_chain_flag_frequency = 0.0;

  // Flag register after the chain, full entangled state.
  double flag_one_frequency = 0.0;
  std::uint64_t flag_one_count = 0;
  // P(first register = target | flag = 1); empty when flag never read 1.
  std::optional<double> target_given_flag;
  // Same, restricted to chains that never took M1.
  std::optional<double> target_given_flag_clean;
  double clean_frequency = 0.0;

  // Two-dimensional model prediction for the post-chain flag reading 1, and
  // its distance from the joint-state frequency.
  double model_flag_probability = 0.0;
  double divergence = 0.0;
};

inline constexpr int kJointModeMaxQubits = 14;

JointModeReport joint_mode_experiment(const JointModeConfig& config);

struct CostRow {
  int n = 0;
  std::uint64_t sublist_size = 0;
  int v = 0;
  double c = 1.0;
  double chain_probability = 1.0;
  double expected_restarts = 1.0;
  std::uint64_t subdivision_queries = 0;
  double restart_adjusted_cost = 0.0;
  double grover_queries = 0.0;
  double classical_queries = 0.0;
  std::optional<MonteCarloEstimate> monte_carlo;
};

struct SweepConfig {
  SizeMode size_mode = SizeMode::exact;
  std::optional<int> v_override;
  std::uint64_t trials = 0;  // Monte Carlo trials per row; 0 skips them
  std::uint64_t seed = 0;    // row i uses seed + i
};

struct CostReport {
  SweepConfig config;
  std::vector<CostRow> rows;
};

// One row per n. The sublist priced is the costliest one the search
// meets: 2^n in paper mode, 2^(n-1) (depth 0) in exact mode.
// restart_adjusted_cost = n * expected_restarts.
CostReport cost_sweep(std::span<const int> n_values, const SweepConfig& config);

}  // namespace qbs

#include "qbs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qbs/errors.hpp"
#include "qbs/statevec.hpp"

namespace qbs {

namespace {

std::uint64_t clean_in_block(const DifferentiatorPlan& plan,
                             const TwoDimState& input, std::uint64_t begin,
                             std::uint64_t end, std::uint64_t seed) {
  Rng rng(seed);
  std::uint64_t clean = 0;
  for (std::uint64_t t = begin; t < end; ++t) {
    if (run_chain(input, plan, ChainMode::stochastic, rng).clean) ++clean;
  }
  return clean;
}

MonteCarloEstimate finish(std::uint64_t trials, std::uint64_t clean) {
  MonteCarloEstimate out;
  out.trials = trials;
  out.clean = clean;
  out.estimate = static_cast<double>(clean) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) /
                                 static_cast<double>(trials));
  return out;
}

void check_trials(std::uint64_t trials) {
  if (trials == 0) {
    throw Error(ErrorCode::invalid_argument, "trial count must be positive");
  }
}

}  // namespace

double expected_restarts(std::uint64_t sublist_size, int v) {
  const DifferentiatorPlan plan = make_plan(sublist_size, v);
  return static_cast<double>(
      std::pow(plan.pair.c, 2 * static_cast<Real>(plan.pair.v)));
}

MonteCarloEstimate monte_carlo_chain(const DifferentiatorPlan& plan,
                                     const TwoDimState& input,
                                     std::uint64_t trials, std::uint64_t seed) {
  check_trials(trials);
  const auto blocks =
      static_cast<std::int64_t>((trials + kMonteCarloBlock - 1) / kMonteCarloBlock);
  std::uint64_t clean = 0;
  bool failed = false;
#pragma omp parallel for schedule(dynamic) reduction(+ : clean) reduction(|| : failed)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kMonteCarloBlock;
    const std::uint64_t end = std::min(trials, begin + kMonteCarloBlock);
    try {
      clean += clean_in_block(plan, input, begin, end,
                              seed + static_cast<std::uint64_t>(b));
    } catch (...) {
      failed = true;
    }
  }
  if (failed) {
    // Re-run serially so the original exception reaches the caller.
    return monte_carlo_chain_serial(plan, input, trials, seed);
  }
  return finish(trials, clean);
}

MonteCarloEstimate monte_carlo_chain_serial(const DifferentiatorPlan& plan,
                                            const TwoDimState& input,
                                            std::uint64_t trials,
                                            std::uint64_t seed) {
  check_trials(trials);
  std::uint64_t clean = 0;
  for (std::uint64_t begin = 0, b = 0; begin < trials;
       begin += kMonteCarloBlock, ++b) {
    const std::uint64_t end = std::min(trials, begin + kMonteCarloBlock);
    clean += clean_in_block(plan, input, begin, end, seed + b);
  }
  return finish(trials, clean);
}

double grover_baseline(std::uint64_t list_size) {
  if (list_size < 2) {
    throw Error(ErrorCode::invalid_size, "list size must be at least 2");
  }
  return std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(list_size));
}

JointModeReport joint_mode_experiment(const JointModeConfig& config) {
  if (config.n < 1 || config.n > kJointModeMaxQubits) {
    throw Error(ErrorCode::resource_limit,
                "joint-mode experiment supports 1 <= n <= " +
                    std::to_string(kJointModeMaxQubits));
  }
  check_trials(config.trials);
  OracleSpec oracle(config.n, config.target);
  const int k = static_cast<int>(config.prefix.size());
  if (k >= config.n) {
    throw Error(ErrorCode::invalid_prefix,
                "prefix must leave at least one free qubit");
  }

  JointModeReport report;
  report.n = config.n;
  report.target = config.target;
  report.trials = config.trials;
  report.mode = config.mode;
  report.sublist_size = std::uint64_t{1} << (config.n - k);

  const int flag = config.n;
  QuantumState state =
      append_flag_qubit(prepare_prefix_state(config.prefix, config.n));
  state = apply_partial_hadamard(std::move(state), k, config.n);
  state = apply_oracle(std::move(state), oracle);
  report.pre_chain_flag_probability = qubit_one_probability(state, flag);
  report.target_in_sublist = report.pre_chain_flag_probability > 0.0;

  const DifferentiatorPlan plan =
      make_plan(report.sublist_size, config.v_override);
  report.v = plan.pair.v;
  const Matrix2c r_dagger = to_complex(transpose(plan.svd.r));
  const Matrix2c q = to_complex(plan.svd.q);
  const Matrix2c m0 = to_complex(plan.pair.m0);
  const Matrix2c m1 = to_complex(plan.pair.m1);
  const double m0_lo = static_cast<double>(plan.pair.m0[0][0]);
  const double m0_hi = static_cast<double>(plan.pair.m0[1][1]);

  // One chain on the joint state; returns whether it stayed clean.
  auto chain = [&](QuantumState s, Rng& rng, bool& clean) {
    s = apply_qubit_operator(std::move(s), flag, r_dagger, false).state;
    clean = true;
    for (int step = 0; step < plan.pair.v; ++step) {
      bool take_m0 = true;
      if (config.mode == ChainMode::stochastic) {
        const double p1 = qubit_one_probability(s, flag);
        const double p0 = m0_lo * m0_lo * (1.0 - p1) + m0_hi * m0_hi * p1;
        take_m0 = uniform01(rng) < p0;
      }
      clean = clean && take_m0;
      s = apply_qubit_operator(std::move(s), flag, take_m0 ? m0 : m1, true)
              .state;
    }
    return apply_qubit_operator(std::move(s), flag, q, false).state;
  };

  struct Tally {
    std::uint64_t pre_flag = 0, flag = 0, flag_target = 0, clean = 0,
                  clean_flag = 0, clean_flag_target = 0;
  };
  const auto blocks = static_cast<std::int64_t>(
      (config.trials + kMonteCarloBlock - 1) / kMonteCarloBlock);
  std::vector<Tally> tallies(static_cast<std::size_t>(blocks));

  // Forced chains are deterministic; evolve once and only sample per trial.
  std::optional<QuantumState> forced_final;
  if (config.mode == ChainMode::forced) {
    Rng unused(config.seed);
    bool clean = true;
    forced_final = chain(state, unused, clean);
  }

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < blocks; ++b) {
    Rng rng(config.seed + static_cast<std::uint64_t>(b));
    Tally& tally = tallies[static_cast<std::size_t>(b)];
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kMonteCarloBlock;
    const std::uint64_t end = std::min(config.trials, begin + kMonteCarloBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      if (sample_basis(state, rng) & 1) ++tally.pre_flag;
      bool clean = true;
      const std::uint64_t readout =
          forced_final ? sample_basis(*forced_final, rng)
                       : sample_basis(chain(state, rng, clean), rng);
      const bool flag_one = readout & 1;
      const bool on_target = (readout >> 1) == config.target;
      tally.flag += flag_one;
      tally.flag_target += flag_one && on_target;
      if (clean) {
        ++tally.clean;
        tally.clean_flag += flag_one;
        tally.clean_flag_target += flag_one && on_target;
      }
    }
  }

  Tally total;
  for (const Tally& t : tallies) {
    total.pre_flag += t.pre_flag;
    total.flag += t.flag;
    total.flag_target += t.flag_target;
    total.clean += t.clean;
    total.clean_flag += t.clean_flag;
    total.clean_flag_target += t.clean_flag_target;
  }
  const auto trials = static_cast<double>(config.trials);
  report.pre_chain_flag_frequency = static_cast<double>(total.pre_flag) / trials;
  report.flag_one_count = total.flag;
  report.flag_one_frequency = static_cast<double>(total.flag) / trials;
  report.clean_frequency = static_cast<double>(total.clean) / trials;
  if (total.flag > 0) {
    report.target_given_flag = static_cast<double>(total.flag_target) /
                               static_cast<double>(total.flag);
  }
  if (total.clean_flag > 0) {
    report.target_given_flag_clean =
        static_cast<double>(total.clean_flag_target) /
        static_cast<double>(total.clean_flag);
  }

  // Two-dimensional model: the same chain on the pure flag state.
  const TwoDimState model_input = second_register_model(
      plan.sublist_size, report.target_in_sublist);
  if (config.mode == ChainMode::forced) {
    Rng unused(config.seed);
    report.model_flag_probability =
        std::norm(run_chain(model_input, plan, ChainMode::forced, unused)
                      .final_state.a1);
  } else {
    // Separate stream so the model draws do not reuse the joint-state ones.
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    double sum = 0.0;
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      sum += std::norm(
          run_chain(model_input, plan, ChainMode::stochastic, rng).final_state.a1);
    }
    report.model_flag_probability = sum / trials;
  }
  report.divergence =
      std::abs(report.flag_one_frequency - report.model_flag_probability);
  return report;
}

CostReport cost_sweep(std::span<const int> n_values, const SweepConfig& config) {
  CostReport report;
  report.config = config;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    if (n < 1 || n > 62) {
      throw Error(ErrorCode::invalid_argument,
                  "sweep n must lie in [1, 62], got " + std::to_string(n));
    }
    CostRow row;
    row.n = n;
    row.sublist_size = config.size_mode == SizeMode::paper
                           ? std::uint64_t{1} << n
                           : std::uint64_t{1} << (n - 1);
    row.subdivision_queries = static_cast<std::uint64_t>(n);
    row.grover_queries = grover_baseline(std::uint64_t{1} << n);
    row.classical_queries = std::ldexp(1.0, n) / 2.0;

    if (row.sublist_size >= 2) {
      const DifferentiatorPlan plan =
          make_plan(row.sublist_size, config.v_override);
      const TwoDimState x = second_register_model(row.sublist_size, true);
      row.v = plan.pair.v;
      row.c = static_cast<double>(plan.pair.c);
      row.chain_probability = chain_success_probability(plan, x);
      row.expected_restarts = expected_restarts(row.sublist_size, row.v);
      if (config.trials > 0) {
        row.monte_carlo = monte_carlo_chain(plan, x, config.trials,
                                            config.seed + i);
      }
    } else if (config.trials > 0) {
      // One-item sublist: read directly, never restarts.
      row.monte_carlo = MonteCarloEstimate{1.0, 0.0, config.trials, config.trials};
    }
    row.restart_adjusted_cost = static_cast<double>(n) * row.expected_restarts;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace qbs

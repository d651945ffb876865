#include "qbs/subdiv.hpp"

#include <cmath>
#include <string>

#include "qbs/errors.hpp"

namespace qbs {

const char* to_string(SizeMode mode) {
  return mode == SizeMode::exact ? "exact" : "paper";
}

const char* to_string(SearchPolicy policy) {
  return policy == SearchPolicy::infer_complement ? "infer_complement"
                                                  : "test_both";
}

void SearchConfig::validate() const {
  if (n < 1 || n > OracleSpec::kMaxIndexQubits) {
    throw Error(ErrorCode::invalid_argument,
                "n must lie in [1, " +
                    std::to_string(OracleSpec::kMaxIndexQubits) + "]");
  }
  if (const auto* retry = std::get_if<RetryUntilClean>(&restart)) {
    if (retry->max_restarts < 1) {
      throw Error(ErrorCode::invalid_argument, "max_restarts must be >= 1");
    }
  } else {
    const int trials = std::get<MajorityVote>(restart).trials;
    if (trials < 1 || trials % 2 == 0) {
      throw Error(ErrorCode::invalid_argument,
                  "majority vote needs an odd trial count >= 1");
    }
  }
  if (v_override && *v_override < 1) {
    throw Error(ErrorCode::invalid_argument, "root power must be >= 1");
  }
}

RestartResult run_restart_policy(const ChainAttempt& attempt,
                                 const RestartPolicy& policy, Rng& rng) {
  RestartResult result;
  if (const auto* retry = std::get_if<RetryUntilClean>(&policy)) {
    for (int i = 0; i < retry->max_restarts; ++i) {
      ++result.restarts;
      try {
        ChainOutcome outcome = attempt(rng);
        if (outcome.clean) {
          result.membership = outcome.readout;
          result.outcomes.push_back(std::move(outcome));
          return result;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::zero_probability_branch) throw;
      }
    }
    throw Error(ErrorCode::restart_budget_exhausted,
                "no clean chain within " +
                    std::to_string(retry->max_restarts) + " attempts");
  }

  const int trials = std::get<MajorityVote>(policy).trials;
  int present = 0;
  int voted = 0;
  for (int i = 0; i < trials; ++i) {
    ++result.restarts;
    try {
      ChainOutcome outcome = attempt(rng);
      if (outcome.readout == Membership::present) ++present;
      ++voted;
      result.outcomes.push_back(std::move(outcome));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::zero_probability_branch) throw;
    }
  }
  if (voted == 0) {
    throw Error(ErrorCode::restart_budget_exhausted,
                "every vote hit a zero-probability branch");
  }
  // Ties (possible only after failed votes) resolve to absent.
  result.membership =
      2 * present > voted ? Membership::present : Membership::absent;
  return result;
}

const DifferentiatorPlan& PlanCache::get(std::uint64_t sublist_size,
                                         std::optional<int> v_override) {
  const auto key = std::make_pair(sublist_size, v_override.value_or(0));
  auto it = plans_.find(key);
  if (it == plans_.end()) {
    it = plans_.emplace(key, make_plan(sublist_size, v_override)).first;
  }
  return it->second;
}

MembershipTest test_membership(std::span<const std::uint8_t> prefix, int b,
                               OracleSpec& oracle, const SearchConfig& config,
                               Rng& rng, PlanCache* cache) {
  const int n = oracle.n();
  const int k = static_cast<int>(prefix.size());
  if (k >= n) {
    throw Error(ErrorCode::invalid_prefix,
                "prefix of length " + std::to_string(k) +
                    " leaves no qubit to test");
  }
  if (b != 0 && b != 1) {
    throw Error(ErrorCode::invalid_argument, "tested bit must be 0 or 1");
  }

  Bits bits(prefix.begin(), prefix.end());
  bits.push_back(static_cast<std::uint8_t>(b));
  QuantumState state = append_flag_qubit(prepare_prefix_state(bits, n));
  state = apply_partial_hadamard(std::move(state), k + 1, n);
  const std::uint64_t before = oracle.query_count();
  state = apply_oracle(std::move(state), oracle);

  MembershipTest test;
  test.queries = static_cast<int>(oracle.query_count() - before);
  test.flag_probability = qubit_one_probability(state, n);

  const std::uint64_t sublist = std::uint64_t{1} << (n - k - 1);
  if (config.size_mode == SizeMode::exact && sublist == 1) {
    // A single-item sublist needs no differentiator: the flag amplitude is
    // exactly 0 or 1.
    test.membership = test.flag_probability > 0.5 ? Membership::present
                                                  : Membership::absent;
    return test;
  }

  PlanCache local;
  PlanCache& plans = cache ? *cache : local;
  TwoDimState input;
  const DifferentiatorPlan* plan = nullptr;
  if (config.size_mode == SizeMode::exact) {
    plan = &plans.get(sublist, config.v_override);
    const double p = test.flag_probability;
    input = {std::sqrt(1.0 - p), std::sqrt(p)};
  } else {
    const std::uint64_t list = std::uint64_t{1} << n;
    plan = &plans.get(list, config.v_override);
    input = second_register_model(list, test.flag_probability > 0.0);
  }

  const ChainAttempt attempt = [&](Rng& r) {
    return run_chain(input, *plan, config.mode, r);
  };
  RestartResult outcome = run_restart_policy(attempt, config.restart, rng);
  test.membership = outcome.membership;
  test.restarts = outcome.restarts;
  test.chain_outcomes = std::move(outcome.outcomes);
  return test;
}

SearchTrace search(OracleSpec& oracle, const SearchConfig& config, Rng& rng) {
  config.validate();
  if (oracle.n() != config.n) {
    throw Error(ErrorCode::dimension,
                "oracle has " + std::to_string(oracle.n()) +
                    " index qubits, config expects " +
                    std::to_string(config.n));
  }

  PlanCache plans;
  SearchTrace trace;
  Bits prefix;
  for (int k = 0; k < config.n; ++k) {
    BitDecision decision;
    decision.k = k;

    auto record = [&](int b, MembershipTest&& test) {
      decision.tested_b = b;
      decision.membership = test.membership;
      decision.queries_used += test.queries;
      decision.restarts += test.restarts;
      for (auto& o : test.chain_outcomes) {
        decision.chain_outcomes.push_back(std::move(o));
      }
    };

    record(0, test_membership(prefix, 0, oracle, config, rng, &plans));
    if (decision.membership == Membership::present) {
      decision.chosen_bit = 0;
    } else if (config.policy == SearchPolicy::infer_complement) {
      decision.chosen_bit = 1;
    } else {
      record(1, test_membership(prefix, 1, oracle, config, rng, &plans));
      if (decision.membership != Membership::present) {
        throw Error(ErrorCode::target_not_found,
                    "both halves tested absent at depth " + std::to_string(k));
      }
      decision.chosen_bit = 1;
    }

    prefix.push_back(static_cast<std::uint8_t>(decision.chosen_bit));
    trace.result |= std::uint64_t(decision.chosen_bit) << (config.n - 1 - k);
    trace.total_queries += decision.queries_used;
    trace.total_chain_restarts += decision.restarts;
    trace.decisions.push_back(std::move(decision));
  }
  return trace;
}

}  // namespace qbs

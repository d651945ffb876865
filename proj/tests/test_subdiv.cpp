#include <doctest.h>

#include <bit>
#include <cmath>

#include "qbs/subdiv.hpp"
#include "test_util.hpp"

using qbs::ErrorCode;
using qbs::Membership;
using qbs::test::code_of;

namespace {

qbs::SearchConfig forced(int n) {
  qbs::SearchConfig c;
  c.n = n;
  return c;
}

int bit_of(std::uint64_t value, int n, int k) {
  return static_cast<int>((value >> (n - 1 - k)) & 1);
}

}  // namespace

TEST_CASE("test_membership on n = 3, target 5 = 101b") {
  qbs::OracleSpec oracle(3, 5);
  qbs::Rng rng(0);
  const auto config = forced(3);

  const qbs::Bits empty, one{1}, one_zero{1, 0};
  const auto t0 = qbs::test_membership(empty, 0, oracle, config, rng);
  CHECK(t0.membership == Membership::absent);
  const auto t1 = qbs::test_membership(one, 0, oracle, config, rng);
  CHECK(t1.membership == Membership::present);
  const auto t2 = qbs::test_membership(one_zero, 1, oracle, config, rng);
  CHECK(t2.membership == Membership::present);
  CHECK(t2.queries == 1);
  CHECK(oracle.query_count() == 3);

  // Flag amplitude is 1/sqrt(M) inside the sublist, 0 outside.
  CHECK(t0.flag_probability == 0.0);
  CHECK(t1.flag_probability == doctest::Approx(0.5));

  const qbs::Bits full{1, 0, 1};
  CHECK(code_of([&] { qbs::test_membership(full, 0, oracle, config, rng); }) ==
        ErrorCode::invalid_prefix);
  CHECK(code_of([&] { qbs::test_membership(empty, 2, oracle, config, rng); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("search examples") {
  qbs::Rng rng(0);
  {
    qbs::OracleSpec oracle(3, 5);
    const auto trace = qbs::search(oracle, forced(3), rng);
    CHECK(trace.result == 5);
    CHECK(trace.total_queries == 3);
    CHECK(oracle.query_count() == 3);
    CHECK(trace.decisions.size() == 3);
  }
  {
    qbs::OracleSpec oracle(1, 0);
    const auto trace = qbs::search(oracle, forced(1), rng);
    CHECK(trace.result == 0);
    CHECK(trace.total_queries == 1);
  }
  for (std::uint64_t t = 0; t < 16; ++t) {
    qbs::OracleSpec oracle(4, t);
    CHECK(qbs::search(oracle, forced(4), rng).result == t);
  }
}

TEST_CASE("forced search finds every target with n queries") {
  qbs::Rng rng(0);
  for (qbs::SizeMode size : {qbs::SizeMode::exact, qbs::SizeMode::paper}) {
    for (int n = 1; n <= 8; ++n) {
      auto config = forced(n);
      config.size_mode = size;
      int wrong = 0;
      int bad_count = 0;
      int bad_prefix = 0;
      for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
        qbs::OracleSpec oracle(n, t);
        const auto trace = qbs::search(oracle, config, rng);
        wrong += trace.result != t;
        bad_count += trace.total_queries != static_cast<std::uint64_t>(n);
        for (const auto& d : trace.decisions) {
          bad_prefix += d.chosen_bit != bit_of(t, n, d.k);
        }
      }
      CAPTURE(n);
      CHECK(wrong == 0);
      CHECK(bad_count == 0);
      CHECK(bad_prefix == 0);
    }
  }
}

TEST_CASE("test_both spends at most 2n queries") {
  qbs::Rng rng(0);
  for (int n = 1; n <= 6; ++n) {
    auto config = forced(n);
    config.policy = qbs::SearchPolicy::test_both;
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
      qbs::OracleSpec oracle(n, t);
      const auto trace = qbs::search(oracle, config, rng);
      CHECK(trace.result == t);
      CHECK(trace.total_queries >= static_cast<std::uint64_t>(n));
      CHECK(trace.total_queries <= static_cast<std::uint64_t>(2 * n));
      // One extra query per 1 bit in the target.
      CHECK(trace.total_queries ==
            static_cast<std::uint64_t>(n + std::popcount(t)));
    }
  }
}

TEST_CASE("trace bookkeeping") {
  qbs::Rng rng(0);
  qbs::OracleSpec oracle(6, 37);
  const auto trace = qbs::search(oracle, forced(6), rng);
  std::uint64_t sum = 0;
  std::uint64_t rebuilt = 0;
  for (const auto& d : trace.decisions) {
    sum += d.queries_used;
    rebuilt = (rebuilt << 1) | d.chosen_bit;
    CHECK(d.queries_used >= 1);
  }
  CHECK(sum == trace.total_queries);
  CHECK(rebuilt == trace.result);
  // Exact mode: the last depth reads the flag directly, no chain.
  CHECK(trace.decisions.back().chain_outcomes.empty());
  CHECK(trace.decisions.front().chain_outcomes.size() == 1);
}

TEST_CASE("run_restart_policy") {
  const auto plan4 = qbs::make_plan(4);
  const auto x4 = qbs::second_register_model(4, true);

  SUBCASE("forced attempts are clean the first time") {
    qbs::Rng rng(0);
    const qbs::ChainAttempt attempt = [&](qbs::Rng& r) {
      return qbs::run_chain(x4, plan4, qbs::ChainMode::forced, r);
    };
    const auto result = qbs::run_restart_policy(attempt, qbs::RetryUntilClean{10}, rng);
    CHECK(result.restarts == 1);
    CHECK(result.membership == Membership::present);
  }

  SUBCASE("restarts follow the geometric law") {
    const double p = qbs::chain_success_probability(plan4, x4);
    qbs::Rng rng(12345);
    const qbs::ChainAttempt attempt = [&](qbs::Rng& r) {
      return qbs::run_chain(x4, plan4, qbs::ChainMode::stochastic, r);
    };
    const int runs = 100;
    double total = 0.0;
    for (int i = 0; i < runs; ++i) {
      const auto result =
          qbs::run_restart_policy(attempt, qbs::RetryUntilClean{1000000}, rng);
      CHECK(result.outcomes.size() == 1);
      CHECK(result.outcomes.front().clean);
      CHECK(result.membership == Membership::present);
      total += result.restarts;
    }
    const double mean = total / runs;
    const double sigma = std::sqrt((1 - p) / (p * p) / runs);
    CHECK(std::abs(mean - 1 / p) <= 3 * sigma);
  }

  SUBCASE("single-vote majority equals one stochastic run") {
    const qbs::ChainAttempt attempt = [&](qbs::Rng& r) {
      return qbs::run_chain(x4, plan4, qbs::ChainMode::stochastic, r);
    };
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      qbs::Rng a(seed), b(seed);
      const auto voted = qbs::run_restart_policy(attempt, qbs::MajorityVote{1}, a);
      const auto single = attempt(b);
      CHECK(voted.membership == single.readout);
      CHECK(voted.restarts == 1);
    }
  }

  SUBCASE("budget exhaustion") {
    const auto big = qbs::make_plan(std::uint64_t{1} << 20);
    const auto x = qbs::second_register_model(std::uint64_t{1} << 20, true);
    const qbs::ChainAttempt attempt = [&](qbs::Rng& r) {
      return qbs::run_chain(x, big, qbs::ChainMode::stochastic, r);
    };
    qbs::Rng rng(1);
    CHECK(code_of([&] { qbs::run_restart_policy(attempt, qbs::RetryUntilClean{5}, rng); }) ==
          ErrorCode::restart_budget_exhausted);
  }
}

TEST_CASE("stochastic search with retry_until_clean stays exact") {
  // Clean chains realize D exactly, so the answer never changes; only the
  // restart count grows.
  qbs::Rng rng(99);
  for (int n = 1; n <= 5; ++n) {
    auto config = forced(n);
    config.mode = qbs::ChainMode::stochastic;
    config.restart = qbs::RetryUntilClean{1000000};
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
      qbs::OracleSpec oracle(n, t);
      const auto trace = qbs::search(oracle, config, rng);
      CHECK(trace.result == t);
      CHECK(trace.total_queries == static_cast<std::uint64_t>(n));
      CHECK(trace.total_chain_restarts >= static_cast<std::uint64_t>(n - 1));
    }
  }
}

TEST_CASE("unclean chains still read out correctly") {
  // M0 and M1 are both diagonal, so any branch sequence only rescales the
  // two singular components and the readout keeps its side.
  std::uint64_t unclean = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto config = forced(6);
    config.mode = qbs::ChainMode::stochastic;
    config.size_mode = qbs::SizeMode::paper;
    config.policy = qbs::SearchPolicy::test_both;
    config.restart = qbs::MajorityVote{1};
    qbs::OracleSpec oracle(6, 13);
    qbs::Rng rng(seed);
    const auto trace = qbs::search(oracle, config, rng);
    CHECK(trace.result == 13);
    for (const auto& d : trace.decisions) {
      for (const auto& o : d.chain_outcomes) unclean += o.clean ? 0 : 1;
    }
  }
  CHECK(unclean > 0);

  for (int j = 1; j <= 12; ++j) {
    const std::uint64_t m = std::uint64_t{1} << j;
    const auto plan = qbs::make_plan(m);
    qbs::Rng rng(j);
    for (int i = 0; i < 2000; ++i) {
      const bool present = i % 2 == 0;
      const auto o = qbs::run_chain(qbs::second_register_model(m, present), plan,
                                    qbs::ChainMode::stochastic, rng);
      CHECK((o.readout == qbs::Membership::present) == present);
    }
  }
}

TEST_CASE("config validation") {
  qbs::Rng rng(0);
  qbs::OracleSpec oracle(3, 1);
  auto config = forced(3);
  config.restart = qbs::MajorityVote{2};
  CHECK(code_of([&] { qbs::search(oracle, config, rng); }) == ErrorCode::invalid_argument);
  config.restart = qbs::RetryUntilClean{0};
  CHECK(code_of([&] { qbs::search(oracle, config, rng); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { qbs::search(oracle, forced(4), rng); }) == ErrorCode::dimension);
}

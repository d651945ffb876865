#pragma once

// Binary-subdivision search: fixes index qubits one at a time, using one
// oracle query plus the differentiator chain as the sublist membership test.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qbs/differentiator.hpp"
#include "qbs/statevec.hpp"
#include "qbs/types.hpp"

namespace qbs {

// exact: plan for the true sublist size 2^(n-k-1) at depth k.
// paper: plan for N = 2^n at every depth, fed the idealized |x> / |y>.
enum class SizeMode { exact, paper };

// infer_complement: b = 1 is taken without a query when b = 0 tests absent
// (valid under the promise that the target exists).
// test_both: b = 1 is queried too; both absent is an error.
enum class SearchPolicy { infer_complement, test_both };

struct RetryUntilClean {
  int max_restarts = 1000;
};

struct MajorityVote {
  int trials = 1;
};

using RestartPolicy = std::variant<RetryUntilClean, MajorityVote>;

const char* to_string(SizeMode mode);
const char* to_string(SearchPolicy policy);

struct SearchConfig {
  int n = 1;
  ChainMode mode = ChainMode::forced;
  SizeMode size_mode = SizeMode::exact;
  SearchPolicy policy = SearchPolicy::infer_complement;
  RestartPolicy restart = RetryUntilClean{};
  std::uint64_t seed = 0;
  std::optional<int> v_override;

  void validate() const;
};

struct RestartResult {
  Membership membership = Membership::absent;
  // Chain attempts made, including the accepted one.
  int restarts = 0;
  // The clean outcome (retry_until_clean) or every vote (majority_vote).
  std::vector<ChainOutcome> outcomes;
};

using ChainAttempt = std::function<ChainOutcome(Rng&)>;

RestartResult run_restart_policy(const ChainAttempt& attempt,
                                 const RestartPolicy& policy, Rng& rng);

struct MembershipTest {
  Membership membership = Membership::absent;
  int queries = 0;
  int restarts = 0;
  // Probability of the flag qubit reading 1 after the oracle.
  double flag_probability = 0.0;
  std::vector<ChainOutcome> chain_outcomes;
};

// Plans keyed by sublist size and root-power override; reused across depths
// and searches.
class PlanCache {
 public:
  const DifferentiatorPlan& get(std::uint64_t sublist_size,
                                std::optional<int> v_override);

 private:
  std::map<std::pair<std::uint64_t, int>, DifferentiatorPlan> plans_;
};

MembershipTest test_membership(std::span<const std::uint8_t> prefix, int b,
                               OracleSpec& oracle, const SearchConfig& config,
                               Rng& rng, PlanCache* cache = nullptr);

struct BitDecision {
  int k = 0;
  int tested_b = 0;
  Membership membership = Membership::absent;
  int queries_used = 0;
  int restarts = 0;
  std::vector<ChainOutcome> chain_outcomes;
  int chosen_bit = 0;
};

struct SearchTrace {
  std::vector<BitDecision> decisions;
  std::uint64_t total_queries = 0;
  std::uint64_t total_chain_restarts = 0;
  std::uint64_t result = 0;
};

SearchTrace search(OracleSpec& oracle, const SearchConfig& config, Rng& rng);

}  // namespace qbs

// qbs: command-line front end for the binary-subdivision search simulator.
//
// Exit status: 0 success, 1 verification or runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbs/analysis.hpp"
#include "qbs/differentiator.hpp"
#include "qbs/errors.hpp"
#include "qbs/serialize.hpp"
#include "qbs/subdiv.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kDefaultSearchCap = 24;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, qbs::SizeMode> kSizeModes{
    {"exact", qbs::SizeMode::exact}, {"paper", qbs::SizeMode::paper}};
const std::map<std::string, qbs::ChainMode> kChainModes{
    {"forced", qbs::ChainMode::forced},
    {"stochastic", qbs::ChainMode::stochastic}};
const std::map<std::string, qbs::SearchPolicy> kPolicies{
    {"infer_complement", qbs::SearchPolicy::infer_complement},
    {"test_both", qbs::SearchPolicy::test_both}};

std::optional<int> optional_v(int v) {
  return v > 0 ? std::optional<int>(v) : std::nullopt;
}

std::uint64_t sublist_for(int n, qbs::SizeMode mode, int depth) {
  if (mode == qbs::SizeMode::paper) return std::uint64_t{1} << n;
  if (depth < 0 || depth >= n) {
    throw UsageError("--depth must lie in [0, n)");
  }
  const std::uint64_t m = std::uint64_t{1} << (n - depth - 1);
  if (m < 2) {
    throw UsageError("a one-item sublist (depth n-1) has no differentiator");
  }
  return m;
}

// ---- matrices -------------------------------------------------------------

struct MatricesArgs {
  int n = 0;
  int v = 0;
  int depth = 0;
  qbs::SizeMode size_mode = qbs::SizeMode::exact;
};

int run_matrices(const MatricesArgs& a) {
  const auto plan =
      qbs::make_plan(sublist_for(a.n, a.size_mode, a.depth), optional_v(a.v));
  std::cout << qbs::plan_to_json(plan).dump(2) << '\n';
  return kExitOk;
}

// ---- differentiate --------------------------------------------------------

struct DifferentiateArgs {
  int n = 0;
  int v = 0;
  int depth = 0;
  bool absent = false;
  qbs::SizeMode size_mode = qbs::SizeMode::exact;
  qbs::ChainMode mode = qbs::ChainMode::forced;
  std::uint64_t seed = 0;
};

int run_differentiate(const DifferentiateArgs& a) {
  const auto plan =
      qbs::make_plan(sublist_for(a.n, a.size_mode, a.depth), optional_v(a.v));
  const auto input = qbs::second_register_model(plan.sublist_size, !a.absent);
  qbs::Rng rng(a.seed);
  const auto outcome = qbs::run_chain(input, plan, a.mode, rng, true);
  qbs::Json doc = {
      {"plan", qbs::plan_to_json(plan)},
      {"input",
       qbs::Json::array({qbs::Json::array({qbs::round_sig15(input.a0.real()),
                                           qbs::round_sig15(input.a0.imag())}),
                         qbs::Json::array({qbs::round_sig15(input.a1.real()),
                                           qbs::round_sig15(input.a1.imag())})})},
      {"present", !a.absent},
      {"mode", qbs::to_string(a.mode)},
      {"seed", a.seed},
      {"closed_form_chain_probability",
       qbs::round_sig15(qbs::chain_success_probability(plan, input))},
      {"expected_restarts",
       qbs::round_sig15(qbs::expected_restarts(plan.sublist_size, plan.pair.v))},
      {"chain", qbs::chain_to_json(outcome)}};
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

// ---- search ---------------------------------------------------------------

struct SearchArgs {
  int n = 0;
  std::uint64_t target = 0;
  qbs::ChainMode mode = qbs::ChainMode::forced;
  qbs::SearchPolicy policy = qbs::SearchPolicy::infer_complement;
  qbs::SizeMode size_mode = qbs::SizeMode::exact;
  std::string restart = "retry";
  int max_restarts = 1000000;
  int votes = 1;
  int v = 0;
  std::uint64_t seed = 0;
  bool allow_large = false;
};

int run_search(const SearchArgs& a) {
  const int cap =
      a.allow_large ? qbs::OracleSpec::kMaxIndexQubits : kDefaultSearchCap;
  if (a.n < 1 || a.n > cap) {
    throw UsageError("--n must lie in [1, " + std::to_string(cap) +
                     "] (use --allow-large for up to 30)");
  }
  if (a.target >= (std::uint64_t{1} << a.n)) {
    throw UsageError("--target must lie in [0, 2^n)");
  }
  qbs::SearchConfig config;
  config.n = a.n;
  config.mode = a.mode;
  config.policy = a.policy;
  config.size_mode = a.size_mode;
  config.seed = a.seed;
  config.v_override = optional_v(a.v);
  if (a.restart == "retry") {
    config.restart = qbs::RetryUntilClean{a.max_restarts};
  } else {
    config.restart = qbs::MajorityVote{a.votes};
  }
  try {
    config.validate();
  } catch (const qbs::Error& e) {
    throw UsageError(e.what());
  }

  qbs::OracleSpec oracle(a.n, a.target);
  qbs::Rng rng(a.seed);
  const auto trace = qbs::search(oracle, config, rng);
  std::cout << qbs::trace_to_json(trace, config, oracle).dump(2) << '\n';
  return trace.result == a.target ? kExitOk : kExitFailure;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
  std::vector<int> n_values;
  std::string format = "csv";
  qbs::SizeMode size_mode = qbs::SizeMode::exact;
  int v = 0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a) {
  qbs::SweepConfig config;
  config.size_mode = a.size_mode;
  config.v_override = optional_v(a.v);
  config.trials = a.trials;
  config.seed = a.seed;
  const auto report = qbs::cost_sweep(a.n_values, config);
  if (a.format == "csv") {
    std::cout << qbs::report_to_csv(report);
  } else {
    std::cout << qbs::report_to_json(report).dump(2) << '\n';
  }
  return kExitOk;
}

// ---- example --------------------------------------------------------------

struct Checkpoint {
  std::string name;
  double expected;
  double actual;
};

// Magnitudes below 1 print with 15 decimals, larger ones with 15
// significant digits.
std::string amount_text(double x) {
  if (std::abs(x) < 1.0) return qbs::format_fixed15(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.15g", x);
  return buf;
}

std::string pair_text(double a, double b) {
  return "(" + amount_text(a) + ", " + amount_text(b) + ")";
}

std::string matrix_text(const qbs::RealMatrix2& m) {
  auto d = [](qbs::Real x) { return static_cast<double>(x); };
  return "[" + pair_text(d(m[0][0]), d(m[0][1])) + ", " +
         pair_text(d(m[1][0]), d(m[1][1])) + "]";
}

// Reproduces the n = 20 walkthrough: x, D, its SVD, M0, then the forced
// chain R^T, 16 x M0, Q.
int run_example() {
  constexpr int n = 20;
  constexpr int v = 16;
  const std::uint64_t list = std::uint64_t{1} << n;
  const auto plan = qbs::make_plan(list, v);
  const auto x = qbs::second_register_model(list, true);
  qbs::Rng rng(0);
  const auto chain =
      qbs::run_chain(x, plan, qbs::ChainMode::forced, rng, true);
  auto d = [](qbs::Real r) { return static_cast<double>(r); };

  std::cout << "n = " << n << ", N = " << list << ", v = " << v << '\n';
  std::cout << "x = " << pair_text(x.a0.real(), x.a1.real()) << '\n';
  std::cout << "D = " << matrix_text(plan.d) << '\n';
  std::cout << "Q = " << matrix_text(plan.svd.q) << '\n';
  std::cout << "V = " << matrix_text(plan.svd.v) << '\n';
  std::cout << "R = " << matrix_text(plan.svd.r) << '\n';
  std::cout << "V^(1/16) = " << matrix_text(plan.pair.root) << '\n';
  std::cout << "c = " << amount_text(d(plan.pair.c)) << '\n';
  std::cout << "M0 = " << matrix_text(plan.pair.m0) << '\n';
  std::cout << "M1 = " << matrix_text(plan.pair.m1) << '\n';

  const auto& path = chain.trajectory;
  std::cout << "after R^T: " << pair_text(path[0].a0.real(), path[0].a1.real())
            << '\n';
  for (int step = 0; step < v; ++step) {
    const auto& s = path[static_cast<std::size_t>(step) + 1];
    std::cout << "step " << step + 1 << " M0 probability "
              << qbs::format_fixed15(chain.step_probabilities[step])
              << " state " << pair_text(s.a0.real(), s.a1.real()) << '\n';
  }
  const auto& final_state = chain.final_state;
  std::cout << "after Q: "
            << pair_text(final_state.a0.real(), final_state.a1.real()) << '\n';
  std::cout << "readout: " << qbs::to_string(chain.readout) << '\n';
  std::cout << "all-M0 chain probability: "
            << qbs::format_sig15(chain.chain_probability) << '\n';
  std::cout << "expected restarts: "
            << qbs::format_sig15(qbs::expected_restarts(list, v)) << '\n';

  const auto& last = path.back();
  const std::vector<Checkpoint> checks{
      {"x[0]", 0.999999523162728, x.a0.real()},
      {"x[1]", 0.000976562500000, x.a1.real()},
      {"D[0][1]", -1023.999511718634, d(plan.d[0][1])},
      {"D[1][1]", 1024.0, d(plan.d[1][1])},
      {"Q[0][0]", -0.707106781186547, d(plan.svd.q[0][0])},
      {"Q[1][0]", 0.707106781186547, d(plan.svd.q[1][0])},
      {"V[0][0]", 1448.154515236507, d(plan.svd.v[0][0])},
      {"V[1][1]", 0.707106865480, d(plan.svd.v[1][1])},
      {"R[0][0]", -0.000488281308208, d(plan.svd.r[0][0])},
      {"R[0][1]", -0.999999880790675, d(plan.svd.r[0][1])},
      {"V^(1/16)[0][0]", 1.575980833365910, d(plan.pair.root[0][0])},
      {"V^(1/16)[1][1]", 0.978572069378633, d(plan.pair.root[1][1])},
      {"M0[0][0]", 0.849549077650853, d(plan.pair.m0[0][0])},
      {"M0[1][1]", 0.527509587270776, d(plan.pair.m0[1][1])},
      {"after R^T [0]", 0.000488281308208, path[0].a0.real()},
      {"after R^T [1]", -0.999999880790675, path[0].a1.real()},
      {"step 1 probability", 0.278266470393446, chain.step_probabilities[0]},
      {"after step 1 [0]", 0.000786372165026, path[1].a0.real()},
      {"after step 1 [1]", -0.999999690809361, path[1].a1.real()},
      {"after step 16 [0]", 0.707106781186547, last.a0.real()},
      {"after step 16 [1]", -0.707106781186548, last.a1.real()},
      {"after Q [0]", 0.0, final_state.a0.real()},
      {"after Q [1]", 1.0, final_state.a1.real()},
  };

  bool ok = true;
  for (const auto& c : checks) {
    const bool match = std::abs(c.expected - c.actual) <= 1e-9;
    ok = ok && match;
    std::cout << "check " << c.name << ": expected "
              << amount_text(c.expected) << " actual " << amount_text(c.actual) << (match ? " ok" : " MISMATCH")
              << '\n';
  }
  std::cout << (ok ? "all checkpoints match" : "checkpoint mismatch") << '\n';
  if (!ok) std::cerr << "example: checkpoint mismatch (see check lines)\n";
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary-subdivision quantum search simulator"};
  app.require_subcommand(1);

  MatricesArgs matrices;
  auto* cmd_matrices =
      app.add_subcommand("matrices", "Print the differentiator plan as JSON");
  cmd_matrices->add_option("--n", matrices.n, "Index qubits (list size 2^n)")
      ->required()
      ->check(CLI::Range(1, 30));
  cmd_matrices->add_option("--v", matrices.v, "Root power override")
      ->check(CLI::PositiveNumber);
  cmd_matrices->add_option("--size-mode", matrices.size_mode,
                           "exact: M = 2^(n-depth-1); paper: M = 2^n")
      ->transform(CLI::CheckedTransformer(kSizeModes, CLI::ignore_case));
  cmd_matrices->add_option("--depth", matrices.depth,
                           "Search depth for exact size mode");

  DifferentiateArgs diff;
  auto* cmd_diff = app.add_subcommand(
      "differentiate", "Run the measurement chain on |x> or |y>");
  cmd_diff->add_option("--n", diff.n)->required()->check(CLI::Range(1, 30));
  cmd_diff->add_option("--v", diff.v)->check(CLI::PositiveNumber);
  cmd_diff->add_option("--depth", diff.depth);
  cmd_diff->add_option("--size-mode", diff.size_mode)
      ->transform(CLI::CheckedTransformer(kSizeModes, CLI::ignore_case));
  cmd_diff->add_option("--mode", diff.mode)
      ->transform(CLI::CheckedTransformer(kChainModes, CLI::ignore_case));
  cmd_diff->add_flag("--absent", diff.absent,
                     "Use |y> (target outside the sublist)");
  cmd_diff->add_option("--seed", diff.seed);

  SearchArgs search;
  auto* cmd_search =
      app.add_subcommand("search", "Run the subdivision search, print trace");
  cmd_search->add_option("--n", search.n)->required();
  cmd_search->add_option("--target", search.target)->required();
  cmd_search->add_option("--mode", search.mode)
      ->transform(CLI::CheckedTransformer(kChainModes, CLI::ignore_case));
  cmd_search->add_option("--policy", search.policy)
      ->transform(CLI::CheckedTransformer(kPolicies, CLI::ignore_case));
  cmd_search->add_option("--size-mode", search.size_mode)
      ->transform(CLI::CheckedTransformer(kSizeModes, CLI::ignore_case));
  cmd_search->add_option("--restart", search.restart,
                         "retry (until a clean chain) or majority")
      ->check(CLI::IsMember({"retry", "majority"}));
  cmd_search->add_option("--max-restarts", search.max_restarts);
  cmd_search->add_option("--votes", search.votes, "Odd vote count");
  cmd_search->add_option("--v", search.v)->check(CLI::PositiveNumber);
  cmd_search->add_option("--seed", search.seed);
  cmd_search->add_flag("--allow-large", search.allow_large,
                       "Lift the n <= 24 cap to 30");

  BenchArgs bench;
  auto* cmd_bench =
      app.add_subcommand("bench", "Cost sweep over n as CSV or JSON");
  cmd_bench->add_option("--n", bench.n_values, "Comma-separated n values")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(1, 62));
  cmd_bench->add_option("--format", bench.format)
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_bench->add_option("--size-mode", bench.size_mode)
      ->transform(CLI::CheckedTransformer(kSizeModes, CLI::ignore_case));
  cmd_bench->add_option("--v", bench.v)->check(CLI::PositiveNumber);
  cmd_bench->add_option("--trials", bench.trials,
                        "Monte Carlo trials per row (0 skips)");
  cmd_bench->add_option("--seed", bench.seed);

  app.add_subcommand("example", "Reproduce and self-check the n = 20 walkthrough");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_matrices->parsed()) return run_matrices(matrices);
    if (cmd_diff->parsed()) return run_differentiate(diff);
    if (cmd_search->parsed()) return run_search(search);
    if (cmd_bench->parsed()) return run_bench(bench);
    return run_example();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qbs::Error& e) {
    std::cerr << "error (" << qbs::to_string(e.code()) << "): " << e.what()
              << '\n';
    return kExitFailure;
  }
}

#include "qbs/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "qbs/errors.hpp"

namespace qbs {

namespace {

Json real(double value) { return round_sig15(value); }
Json real(Real value) { return round_sig15(static_cast<double>(value)); }

Json matrix(const RealMatrix2& m) {
  return Json::array({Json::array({real(m[0][0]), real(m[0][1])}),
                      Json::array({real(m[1][0]), real(m[1][1])})});
}

RealMatrix2 matrix_from(const Json& j) {
  RealMatrix2 m{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m[r][c] = j.at(r).at(c).get<double>();
  }
  return m;
}

Json complex(const Complex& z) {
  return Json::array({real(z.real()), real(z.imag())});
}

Json state(const TwoDimState& s) {
  return Json::array({complex(s.a0), complex(s.a1)});
}

const char* to_string(Branch b) { return b == Branch::m0 ? "M0" : "M1"; }

Json restart_policy(const RestartPolicy& policy) {
  if (const auto* retry = std::get_if<RetryUntilClean>(&policy)) {
    return {{"kind", "retry_until_clean"}, {"max_restarts", retry->max_restarts}};
  }
  return {{"kind", "majority_vote"},
          {"trials", std::get<MajorityVote>(policy).trials}};
}

Json optional_int(const std::optional<int>& v) {
  return v ? Json(*v) : Json(nullptr);
}

SizeMode size_mode_from(const std::string& s) {
  if (s == "exact") return SizeMode::exact;
  if (s == "paper") return SizeMode::paper;
  throw Error(ErrorCode::invalid_argument, "unknown size mode '" + s + "'");
}

}  // namespace

std::string format_sig15(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

std::string format_fixed15(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", value);
  std::string out = buf;
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

double round_sig15(double value) {
  if (value == 0.0) return 0.0;
  return std::strtod(format_sig15(value).c_str(), nullptr);
}

Json plan_to_json(const DifferentiatorPlan& plan) {
  return {{"M", plan.sublist_size},
          {"v", plan.pair.v},
          {"c", real(plan.pair.c)},
          {"D", matrix(plan.d)},
          {"Q", matrix(plan.svd.q)},
          {"V", matrix(plan.svd.v)},
          {"R", matrix(plan.svd.r)},
          {"V_root", matrix(plan.pair.root)},
          {"M0", matrix(plan.pair.m0)},
          {"M1", matrix(plan.pair.m1)}};
}

DifferentiatorPlan plan_from_json(const Json& doc) {
  DifferentiatorPlan plan;
  plan.sublist_size = doc.at("M").get<std::uint64_t>();
  plan.pair.v = doc.at("v").get<int>();
  plan.pair.c = doc.at("c").get<double>();
  plan.d = matrix_from(doc.at("D"));
  plan.svd.q = matrix_from(doc.at("Q"));
  plan.svd.v = matrix_from(doc.at("V"));
  plan.svd.r = matrix_from(doc.at("R"));
  plan.pair.root = matrix_from(doc.at("V_root"));
  plan.pair.m0 = matrix_from(doc.at("M0"));
  plan.pair.m1 = matrix_from(doc.at("M1"));
  return plan;
}

Json chain_to_json(const ChainOutcome& outcome) {
  Json branches = Json::array();
  for (Branch b : outcome.branches) branches.push_back(to_string(b));
  Json steps = Json::array();
  for (double p : outcome.step_probabilities) steps.push_back(real(p));
  Json out = {{"branches", branches},
              {"step_probabilities", steps},
              {"chain_probability", real(outcome.chain_probability)},
              {"clean", outcome.clean},
              {"readout", to_string(outcome.readout)},
              {"final_state", state(outcome.final_state)}};
  if (!outcome.trajectory.empty()) {
    Json path = Json::array();
    for (const auto& s : outcome.trajectory) path.push_back(state(s));
    out["trajectory"] = path;
  }
  return out;
}

Json trace_to_json(const SearchTrace& trace, const SearchConfig& config,
                   const OracleSpec& oracle) {
  Json decisions = Json::array();
  for (const BitDecision& d : trace.decisions) {
    Json chains = Json::array();
    for (const auto& c : d.chain_outcomes) chains.push_back(chain_to_json(c));
    decisions.push_back({{"k", d.k},
                         {"tested_b", d.tested_b},
                         {"membership", to_string(d.membership)},
                         {"queries", d.queries_used},
                         {"restarts", d.restarts},
                         {"chosen_bit", d.chosen_bit},
                         {"chains", chains}});
  }
  return {{"n", config.n},
          {"target", oracle.target()},
          {"result", trace.result},
          {"found", trace.result == oracle.target()},
          {"total_queries", trace.total_queries},
          {"oracle_queries", oracle.query_count()},
          {"total_chain_restarts", trace.total_chain_restarts},
          {"config",
           {{"mode", to_string(config.mode)},
            {"size_mode", to_string(config.size_mode)},
            {"policy", to_string(config.policy)},
            {"restart_policy", restart_policy(config.restart)},
            {"seed", config.seed},
            {"v", optional_int(config.v_override)}}},
          {"decisions", decisions}};
}

Json report_to_json(const CostReport& report) {
  Json rows = Json::array();
  for (const CostRow& r : report.rows) {
    Json row = {{"n", r.n},
                {"M", r.sublist_size},
                {"v", r.v},
                {"c", real(r.c)},
                {"chain_probability", real(r.chain_probability)},
                {"expected_restarts", real(r.expected_restarts)},
                {"subdivision_queries", r.subdivision_queries},
                {"restart_adjusted_cost", real(r.restart_adjusted_cost)},
                {"grover_queries", real(r.grover_queries)},
                {"classical_queries", real(r.classical_queries)},
                {"mc_estimate", nullptr},
                {"mc_standard_error", nullptr},
                {"mc_trials", nullptr}};
    if (r.monte_carlo) {
      row["mc_estimate"] = real(r.monte_carlo->estimate);
      row["mc_standard_error"] = real(r.monte_carlo->standard_error);
      row["mc_trials"] = r.monte_carlo->trials;
    }
    rows.push_back(row);
  }
  return {{"size_mode", to_string(report.config.size_mode)},
          {"v", optional_int(report.config.v_override)},
          {"trials", report.config.trials},
          {"seed", report.config.seed},
          {"restart_adjusted_cost",
           "n * expected_restarts at the costliest sublist (M column)"},
          {"rows", rows}};
}

std::string report_to_csv(const CostReport& report) {
  std::ostringstream out;
  out << "n,M,v,c,chain_probability,expected_restarts,subdivision_queries,"
         "restart_adjusted_cost,grover_queries,classical_queries,"
         "mc_estimate,mc_standard_error,mc_trials\n";
  for (const CostRow& r : report.rows) {
    out << r.n << ',' << r.sublist_size << ',' << r.v << ','
        << format_sig15(r.c) << ',' << format_sig15(r.chain_probability) << ','
        << format_sig15(r.expected_restarts) << ',' << r.subdivision_queries
        << ',' << format_sig15(r.restart_adjusted_cost) << ','
        << format_sig15(r.grover_queries) << ','
        << format_sig15(r.classical_queries) << ',';
    if (r.monte_carlo) {
      out << format_sig15(r.monte_carlo->estimate) << ','
          << format_sig15(r.monte_carlo->standard_error) << ','
          << r.monte_carlo->trials;
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

CostReport report_from_json(const Json& doc) {
  CostReport report;
  report.config.size_mode = size_mode_from(doc.at("size_mode").get<std::string>());
  if (!doc.at("v").is_null()) report.config.v_override = doc.at("v").get<int>();
  report.config.trials = doc.at("trials").get<std::uint64_t>();
  report.config.seed = doc.at("seed").get<std::uint64_t>();
  for (const Json& j : doc.at("rows")) {
    CostRow r;
    r.n = j.at("n").get<int>();
    r.sublist_size = j.at("M").get<std::uint64_t>();
    r.v = j.at("v").get<int>();
    r.c = j.at("c").get<double>();
    r.chain_probability = j.at("chain_probability").get<double>();
    r.expected_restarts = j.at("expected_restarts").get<double>();
    r.subdivision_queries = j.at("subdivision_queries").get<std::uint64_t>();
    r.restart_adjusted_cost = j.at("restart_adjusted_cost").get<double>();
    r.grover_queries = j.at("grover_queries").get<double>();
    r.classical_queries = j.at("classical_queries").get<double>();
    if (!j.at("mc_estimate").is_null()) {
      MonteCarloEstimate mc;
      mc.estimate = j.at("mc_estimate").get<double>();
      mc.standard_error = j.at("mc_standard_error").get<double>();
      mc.trials = j.at("mc_trials").get<std::uint64_t>();
      r.monte_carlo = mc;
    }
    report.rows.push_back(r);
  }
  return report;
}

Json joint_report_to_json(const JointModeReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? real(*v) : Json(nullptr);
  };
  return {{"n", r.n},
          {"target", r.target},
          {"M", r.sublist_size},
          {"target_in_sublist", r.target_in_sublist},
          {"v", r.v},
          {"trials", r.trials},
          {"mode", to_string(r.mode)},
          {"pre_chain_flag_probability", real(r.pre_chain_flag_probability)},
          {"pre_chain_flag_frequency", real(r.pre_chain_flag_frequency)},
          {"flag_one_frequency", real(r.flag_one_frequency)},
          {"target_given_flag", opt(r.target_given_flag)},
          {"target_given_flag_clean", opt(r.target_given_flag_clean)},
          {"clean_frequency", real(r.clean_frequency)},
          {"model_flag_probability", real(r.model_flag_probability)},
          {"divergence", real(r.divergence)}};
}

}  // namespace qbs

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QBS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

}  // namespace

TEST_CASE("matrices") {
  const auto r20 = run("matrices --n 20 --v 16 --size-mode paper");
  CHECK(r20.status == 0);
  const auto doc = nlohmann::json::parse(r20.out);
  CHECK(doc["M0"][0][0].get<double>() == 0.849549077650853);
  CHECK(doc["M0"][1][1].get<double>() == 0.527509587270776);

  const auto r30 = nlohmann::json::parse(run("matrices --n 30 --v 16 --size-mode paper").out);
  CHECK(std::abs(r30["V"][0][0].get<double>() - 46340.95000644678) <= 1e-9);
  CHECK(std::abs(r30["V"][1][1].get<double>() - 0.70710678127) <= 1e-9);

  CHECK(run("matrices --n 0").status == 2);
  CHECK(run("matrices --n 31").status == 2);
  CHECK(run("matrices --n 1").status == 2);  // exact mode: one-item sublist
  CHECK(run("matrices --n 3 --depth 1").status == 0);
}

TEST_CASE("differentiate") {
  const auto present = run("differentiate --n 20 --size-mode paper --v 16");
  CHECK(present.status == 0);
  const auto doc = nlohmann::json::parse(present.out);
  CHECK(doc["chain"]["readout"] == "present");
  CHECK(doc["chain"]["trajectory"].size() == 17);

  const auto absent = nlohmann::json::parse(run("differentiate --n 10 --absent").out);
  CHECK(absent["chain"]["readout"] == "absent");

  const auto s1 = run("differentiate --n 4 --mode stochastic --seed 5");
  const auto s2 = run("differentiate --n 4 --mode stochastic --seed 5");
  CHECK(s1.status == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("example") {
  const auto r = run("example");
  CHECK(r.status == 0);
  CHECK(r.out.find("0.278266470393446") != std::string::npos);
  CHECK(r.out.find("(0.000488281308208, -0.999999880790675)") != std::string::npos);
  CHECK(r.out.find("after Q: (0.000000000000000, 1.00000000000000)") != std::string::npos);
  CHECK(r.out.find("MISMATCH") == std::string::npos);
}

TEST_CASE("search") {
  const auto r = run("search --n 8 --target 201 --mode forced --seed 7");
  CHECK(r.status == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["result"] == 201);
  CHECK(doc["total_queries"] == 8);

  const auto one = nlohmann::json::parse(run("search --n 1 --target 0 --mode forced").out);
  CHECK(one["result"] == 0);
  CHECK(one["total_queries"] == 1);

  CHECK(run("search --n 8 --target 300").status == 2);
  CHECK(run("search --n 25 --target 0").status == 2);
  CHECK(run("search --n 4 --target 3 --restart majority --votes 2").status == 2);
  CHECK(run("search --n 4 --target 3 --policy nonsense").status == 2);

  // A tiny restart budget on a 2^9 sublist runs out: runtime failure.
  CHECK(run("search --n 10 --target 3 --mode stochastic --max-restarts 2").status == 1);

  const auto st = run("search --n 5 --target 19 --mode stochastic --seed 3");
  CHECK(st.status == 0);
  CHECK(st.out == run("search --n 5 --target 19 --mode stochastic --seed 3").out);
}

TEST_CASE("bench") {
  const auto csv = run("bench --n 1,2,4 --format csv");
  CHECK(csv.status == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 4);

  const auto json = run("bench --n 20 --size-mode paper --format json --trials 100");
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["rows"][0]["expected_restarts"].get<double>() ==
        doctest::Approx(3.869e8).epsilon(1e-3));

  CHECK(csv.out == run("bench --n 1,2,4 --format csv").out);
  CHECK(run("bench --n 1,2 --format xml").status == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("search --n 3 --target 1 --bogus").status == 2);
  CHECK(run("--help").status == 0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("HDS_CLI");
  REQUIRE_MESSAGE(p != nullptr, "HDS_CLI not set");
  return p;
}

int run(const std::string& args) {
  int st = std::system((cli_path() + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(st);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const std::string kTmp = "/tmp/hds_cli_test";

}  // namespace

TEST_CASE("knapsack subcommand solves the feasible example") {
  std::string out = kTmp + "_knap.json";
  CHECK(run("knapsack --weights 3,5,7 --target 8 -o " + out) == 0);
  json doc = json::parse(slurp(out));
  CHECK(doc["feasible"] == true);
  CHECK(doc["f_opt"] == 0);
  CHECK(doc["z_opt"] == json::array({1, 1, 0}));
}

TEST_CASE("infeasible knapsack reports the closest value") {
  std::string out = kTmp + "_knap2.json";
  CHECK(run("knapsack --weights 3,5,7 --target 1 -o " + out) == 0);
  json doc = json::parse(slurp(out));
  CHECK(doc["feasible"] == false);
  CHECK(doc["f_opt"] == 1);
}

TEST_CASE("bounds table") {
  std::string out = kTmp + "_bounds.json";
  CHECK(run("bounds --m 1 --delta-inf 1 --L 2 -o " + out) == 0);
  json doc = json::parse(slurp(out));
  CHECK(doc["table"]["delta"] == 6.0);
  CHECK(doc["table"]["lipschitz_f"] == 2.0);   // L (m delta)^2
  CHECK(doc["table"]["h_inf_cap"] == 24.0);    // 2 * 6 * 2
  CHECK(doc["table"]["ip_count_cap"] == "289");
  CHECK(doc["table"]["hs_comparison"] == "27");
}

TEST_CASE("solve on an explicit instance, hidden and known modes agree") {
  std::string inst = kTmp + "_inst.json";
  spit(inst, R"({
    "n": 3,
    "W": [[3, 5, 7]],
    "function": {"type": "knapsack", "target": 8}
  })");

  std::string out_h = kTmp + "_h.json";
  std::string out_k = kTmp + "_k.json";
  CHECK(run("solve --instance " + inst + " -o " + out_h) == 0);
  CHECK(run("solve --instance " + inst + " --mode known -o " + out_k) == 0);

  json h = json::parse(slurp(out_h));
  json k = json::parse(slurp(out_k));
  CHECK(h["report"]["mode"] == "hidden");
  CHECK(k["report"]["mode"] == "known");
  CHECK(h["report"]["result"]["f_opt"] == 0);
  CHECK(k["report"]["result"]["f_opt"] == 0);
  CHECK(h["report"]["result"]["z_opt"] == json::array({1, 1, 0}));
  for (auto key : {"h_norm_ok", "ip_count_ok", "frac_calls_ok", "phi_ok"}) {
    CHECK(h["report"]["compliance"][key] == true);
    CHECK(k["report"]["compliance"][key] == true);
  }
}

TEST_CASE("repeated runs are byte-identical") {
  std::string inst = kTmp + "_det.json";
  spit(inst, R"({
    "n": 6,
    "W": [[2, -1, 3, 1, -2, 1]],
    "function": {"type": "separable_quadratic", "targets": [2], "weights": [1]}
  })");
  std::string a = kTmp + "_det_a.json", b = kTmp + "_det_b.json";
  CHECK(run("solve --instance " + inst + " -o " + a) == 0);
  CHECK(run("solve --instance " + inst + " -o " + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("hidden mode works from a generator reference without W") {
  std::string inst = kTmp + "_ref.json";
  spit(inst, R"({
    "hidden_ref": {"family": "knapsack", "m": 1, "n": 8, "delta_inf": 3, "seed": 11}
  })");
  std::string out = kTmp + "_ref_out.json";
  CHECK(run("solve --instance " + inst + " -o " + out) == 0);
  json doc = json::parse(slurp(out));
  CHECK(doc["report"]["compliance"]["phi_ok"] == true);
  // known mode has no W to read: malformed-input exit
  CHECK(run("solve --instance " + inst + " --mode known") == 3);
}

TEST_CASE("delta override is echoed in the report") {
  std::string inst = kTmp + "_ovr.json";
  spit(inst, R"({
    "n": 3,
    "W": [[3, 5, 7]],
    "function": {"type": "knapsack", "target": 8}
  })");
  std::string out = kTmp + "_ovr_out.json";
  CHECK(run("solve --instance " + inst + " --delta 9 -o " + out) == 0);
  json doc = json::parse(slurp(out));
  CHECK(doc["report"]["delta_used"] == 9.0);
  CHECK(doc["report"]["delta_source"] == "override");
}

TEST_CASE("malformed inputs exit 3") {
  CHECK(run("solve --instance /nonexistent/missing.json") == 3);

  std::string bad = kTmp + "_bad.json";
  spit(bad, "{ not json");
  CHECK(run("solve --instance " + bad) == 3);

  std::string incons = kTmp + "_incons.json";
  spit(incons, R"({
    "n": 2,
    "W": [[5, 1]],
    "function": {"type": "knapsack", "target": 3},
    "revealed": {"delta_inf": 2}
  })");
  CHECK(run("solve --instance " + incons) == 3);

  CHECK(run("frobnicate") == 3);
  CHECK(run("solve") == 3);  // missing required --instance
}

TEST_CASE("brute subcommand ground truth") {
  std::string inst = kTmp + "_bf.json";
  spit(inst, R"({
    "n": 3,
    "W": [[3, 5, 7]],
    "function": {"type": "knapsack", "target": 8}
  })");
  std::string out = kTmp + "_bf_out.json";
  CHECK(run("brute --instance " + inst + " -o " + out) == 0);
  json doc = json::parse(slurp(out));
  CHECK(doc["f_min"] == 0);
  CHECK(doc["minimizer_count"] == 1);
  CHECK(doc["first_minimizer"] == json::array({1, 1, 0}));
}

TEST_CASE("bench writes the proximity csv") {
  std::string out = kTmp + "_bench.csv";
  CHECK(run("bench --family separable --m 1 --n 8 --delta-inf 2 --trials 3 --seed 5 "
            "--bench-n 10 -o " + out) == 0);
  std::string csv = slurp(out);
  CHECK(csv.rfind("seed,n,m,measured,bound,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 4);
}

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cimac/cli.hpp"
#include "cimac/scenario.hpp"
#include "test_support.hpp"

using namespace cimac;
using namespace cimac::testing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cimac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cimac_cli_" + name);
}

std::string write_scenario(const std::string& name, const Scenario& s) {
  const auto path = temp_path(name);
  std::ofstream(path) << scenario_to_json(s).dump();
  return path.string();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string row1 = scenario_path("table1_row1.json");

}  // namespace

TEST_CASE("solve prints the optimal value") {
  const Run r = cli({"solve", "--scenario", row1});
  CHECK(r.code == 0);
  CHECK(r.out == "0.500000\n");
  CHECK(r.err.find("\"scenario_fingerprint\"") != std::string::npos);

  const std::string forced = write_scenario(
      "agag.json", make_scenario(Belief::point_mass({Mode::kAggressive, Mode::kAggressive}),
                                 SpaceVariant::kConstrained, 10));
  CHECK(cli({"solve", "--scenario", forced}).out == "10.000000\n");
}

TEST_CASE("parse failures exit with 2") {
  const auto path = temp_path("bad.json");
  std::ofstream(path) << R"({"agents":2,"horizon":10,"alpha":1,"beta":0,"grid_step":0.05,
    "prescription_space":"constrained","initial_belief":[0,0.5,0.4]})";
  CHECK(cli({"solve", "--scenario", path.string()}).code == 2);
  CHECK(cli({"solve"}).code == 2);
  CHECK(cli({"solve", "--scenario", row1, "--space", "partial"}).code == 2);
  CHECK(cli({"evaluate", "--scenario", row1}).code == 2);
  CHECK(cli({"evaluate", "--scenario", row1, "--baseline", "1,2"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("state explosion exits with 3") {
  Scenario s = load_scenario(scenario_path("table1_row3.json"));
  s.max_belief_states = 100;
  const Run r = cli({"solve", "--scenario", write_scenario("explode.json", s)});
  CHECK(r.code == 3);
  CHECK(r.err.find("max_belief_states") != std::string::npos);
}

TEST_CASE("evaluate baselines") {
  const Run r = cli({"evaluate", "--scenario", row1, "--baseline", "1.1,1.1,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find(",exact,5.000000,") != std::string::npos);
  CHECK(cli({"evaluate", "--scenario", row1, "--baseline", "0.8,1.1,0.5"}).out.find(",2.750000,") !=
        std::string::npos);

  const std::vector<std::string> mc{"evaluate", "--scenario", row1, "--baseline", "1.1,1.1,1",
                                    "--method", "mc", "--episodes", "2000", "--seed", "5"};
  const Run a = cli(mc);
  const Run b = cli(mc);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find(",mc,") != std::string::npos);
}

TEST_CASE("evaluate a saved policy and reject a mismatched one") {
  const auto policy = temp_path("row1_policy.json");
  CHECK(cli({"solve", "--scenario", row1, "--out", policy.string()}).code == 0);
  CHECK(std::filesystem::exists(policy.string() + ".manifest.json"));
  const Run ok = cli({"evaluate", "--scenario", row1, "--policy", policy.string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("proposed,row1,exact,0.500000") != std::string::npos);

  const Run mismatch =
      cli({"evaluate", "--scenario", scenario_path("table1_row2.json"), "--policy", policy.string()});
  CHECK(mismatch.code == 4);
  CHECK(cli({"evaluate", "--scenario", row1, "--space", "full", "--policy", policy.string()}).code ==
        4);
  std::filesystem::remove(policy);
  std::filesystem::remove(policy.string() + ".manifest.json");
}

TEST_CASE("compare writes the table and plot data") {
  const auto out = temp_path("compare.csv");
  const Run r = cli({"compare", "--scenario", scenario_path("table1.json"), "--belief", "row1",
                     "--out", out.string(), "--plot-data"});
  CHECK(r.code == 0);
  const std::string csv = read_file(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(csv.find("proposed,row1,exact,0.500000") != std::string::npos);
  CHECK(csv.find("\"policy-(0.9,0.8,0.5)\",row1,exact,0.500000") != std::string::npos);
  const std::string tsv = read_file(out.string() + ".plot.tsv");
  CHECK(tsv.rfind("belief_id\tpolicy\texpected_cost\n", 0) == 0);
  const std::string manifest = read_file(out.string() + ".manifest.json");
  CHECK(manifest.find("belief_fingerprints") != std::string::npos);
  for (const auto& p : {out.string(), out.string() + ".plot.tsv", out.string() + ".manifest.json"}) {
    std::filesystem::remove(p);
  }

  const Run bare = cli({"compare", "--scenario", row1, "--baselines-only"});
  CHECK(bare.code == 0);
  CHECK(bare.out.find("proposed") == std::string::npos);

  Scenario none = make_scenario(b1(), SpaceVariant::kConstrained, 10);
  const Run only = cli({"compare", "--scenario", write_scenario("none.json", none)});
  CHECK(std::count(only.out.begin(), only.out.end(), '\n') == 2);
}

TEST_CASE("trace shows the belief trajectory") {
  const Run r = cli({"trace", "--scenario", row1, "--profile", "De,Ag", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("t=1  actions 01  cost 0") != std::string::npos);
  CHECK(r.out.find("total cost 0") != std::string::npos);
  const std::string b2_row = "De   0.0000   1.0000   0.0000";
  CHECK(r.out.find(b2_row) != std::string::npos);

  CHECK(cli({"trace", "--scenario", row1, "--profile", "Ag,Ag"}).code == 5);
  CHECK(cli({"trace", "--scenario", row1, "--profile", "De,Xx"}).code == 2);

  const Run s1 = cli({"trace", "--scenario", row1, "--profile", "De,Pa", "--seed", "1"});
  const Run s2 = cli({"trace", "--scenario", row1, "--profile", "De,Pa", "--seed", "2"});
  auto body = [](const std::string& text) { return text.substr(text.find('\n')); };
  CHECK(body(s1.out) == body(s2.out));
}

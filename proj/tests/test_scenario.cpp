#include <doctest.h>

#include "cimac/errors.hpp"
#include "cimac/scenario.hpp"
#include "test_support.hpp"

using namespace cimac;
using namespace cimac::testing;

namespace {

nlohmann::json minimal() {
  return {{"agents", 2},        {"horizon", 10},
          {"alpha", 1.0},       {"beta", 0.0},
          {"grid_step", 0.05},  {"prescription_space", "constrained"},
          {"initial_belief", {0, 0.5, 0.5, 0, 0, 0, 0, 0, 0}}};
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
  const Scenario s = scenario_from_json(minimal());
  CHECK(s.agents == 2);
  CHECK(s.dedup_rounding == 9);
  CHECK(s.prescription_space == SpaceVariant::kConstrained);
  CHECK(s.initial_belief() == b1());
  CHECK(s.initial_beliefs[0].id == "initial");
  CHECK(s.baselines.empty());
}

TEST_CASE("malformed scenarios are parse errors") {
  auto broken = minimal();
  broken["initial_belief"] = {0, 0.5, 0.4, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  broken = minimal();
  broken["initial_belief"] = {0, 0.5};
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  broken = minimal();
  broken.erase("horizon");
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  broken = minimal();
  broken["beta"] = 0.5;
  broken["alpha"] = 0.2;
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  broken = minimal();
  broken["grid_step"] = 0.3;
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  broken = minimal();
  broken["prescription_space"] = "other";
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  broken = minimal();
  broken["horizon"] = "ten";
  CHECK_THROWS_AS(scenario_from_json(broken), ParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ParseError);
}

TEST_CASE("bundled table scenarios") {
  const Scenario table = load_scenario(scenario_path("table1.json"));
  CHECK(table.initial_beliefs.size() == 6);
  CHECK(table.baselines.size() == 7);
  CHECK(table.belief_index("row3") == 2);
  CHECK_THROWS_AS(table.belief_index("row9"), InvalidInput);
  const Scenario row = load_scenario(scenario_path("table1_row1.json"));
  CHECK(row.initial_belief() == b1());
  CHECK(row.initial_beliefs[0].id == "row1");
  CHECK(scenario_fingerprint(row) == scenario_fingerprint(table.with_belief(0)));
  const Scenario full = load_scenario(scenario_path("table1_row1_full.json"));
  CHECK(full.prescription_space == SpaceVariant::kFull);
  CHECK(scenario_fingerprint(full) != scenario_fingerprint(row));
}

TEST_CASE("json round trip preserves the fingerprint") {
  const Scenario table = load_scenario(scenario_path("table1.json"));
  const Scenario again = scenario_from_json(scenario_to_json(table));
  CHECK(again.initial_beliefs.size() == table.initial_beliefs.size());
  CHECK(again.baselines == table.baselines);
  for (std::size_t b = 0; b < table.initial_beliefs.size(); ++b) {
    CHECK(scenario_fingerprint(again.with_belief(b)) == scenario_fingerprint(table.with_belief(b)));
  }
}

TEST_CASE("fingerprint tracks solution-relevant fields only") {
  Scenario s = make_scenario(b1(), SpaceVariant::kConstrained, 10);
  const std::string base = scenario_fingerprint(s);
  CHECK(base.size() == 16);
  s.baselines.push_back({0.8, 1.1, 1});
  s.max_belief_states = 7;
  CHECK(scenario_fingerprint(s) == base);
  s.horizon = 9;
  CHECK(scenario_fingerprint(s) != base);
}

TEST_CASE("threshold triples") {
  const ThresholdParams p = parse_threshold_triple("0.8,1.1,0.5");
  CHECK(p == ThresholdParams{0.8, 1.1, 0.5});
  CHECK(p.label() == "policy-(0.8,1.1,0.5)");
  CHECK_THROWS_AS(parse_threshold_triple("0.8,1.1"), ParseError);
  CHECK_THROWS_AS(parse_threshold_triple("0.8,1.1,0.5,2"), ParseError);
}

#include <doctest.h>

#include "cimac/errors.hpp"
#include "cimac/model.hpp"

using namespace cimac;

namespace {
constexpr Mode De = Mode::kDesigner;
constexpr Mode Ag = Mode::kAggressive;
constexpr Mode Pa = Mode::kPassive;
}  // namespace

TEST_CASE("stage cost is zero only when exactly one agent transmits") {
  CHECK(stage_cost({De, Ag}, {0, 1}) == 0);
  CHECK(stage_cost({De, Ag}, {1, 1}) == 1);
  CHECK(stage_cost({Pa, Pa}, {0, 0}) == 1);
  CHECK(stage_cost({De, Ag, Pa}, {0, 1, 0}) == 0);
  CHECK(stage_cost({De, Ag, Pa}, {1, 1, 1}) == 1);
  CHECK_THROWS_AS(stage_cost({De, Ag}, {0, 1, 0}), InvalidInput);
}

TEST_CASE("profile index is base 3 with agent 1 most significant") {
  CHECK(profile_index({De, Ag}) == 1);
  CHECK(profile_index({De, De}) == 0);
  CHECK(profile_index({Ag, De}) == 3);
  CHECK(profile_from_index(8, 2) == ModeProfile{Pa, Pa});
  CHECK(profile_from_index(5, 2) == ModeProfile{Ag, Pa});
  for (int n = 1; n <= 4; ++n) {
    for (std::size_t i = 0; i < num_profiles(n); ++i) {
      CHECK(profile_index(profile_from_index(i, n)) == i);
    }
  }
  CHECK_THROWS_AS(profile_from_index(9, 2), InvalidInput);
}

TEST_CASE("joint action index is binary with agent 1 most significant") {
  CHECK(JointAction({1, 0}).index() == 2);
  CHECK(JointAction({0, 1}).index() == 1);
  CHECK(JointAction::from_index(2, 2) == JointAction({1, 0}));
  CHECK(JointAction::from_index(5, 3).to_string() == "101");
  CHECK(JointAction({1, 1, 0}).transmitters() == 2);
  CHECK_THROWS_AS(JointAction::from_index(4, 2), InvalidInput);
  CHECK_THROWS_AS(JointAction({0, 2}), InvalidInput);
}

TEST_CASE("counts and names") {
  CHECK(num_profiles(2) == 9);
  CHECK(num_profiles(3) == 27);
  CHECK(num_joint_actions(2) == 4);
  CHECK(mode_name(Ag) == "Ag");
  CHECK(parse_mode("Pa") == Pa);
  CHECK_THROWS_AS(parse_mode("Xx"), InvalidInput);
  CHECK(ModeProfile::parse("De,Ag") == ModeProfile{De, Ag});
  CHECK(ModeProfile{De, Ag}.to_string() == "De,Ag");
  CHECK_THROWS_AS(ModeProfile::parse("De;Ag"), InvalidInput);
}

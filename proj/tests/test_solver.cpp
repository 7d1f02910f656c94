#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "cimac/errors.hpp"
#include "cimac/solver.hpp"
#include "test_support.hpp"

using namespace cimac;
using namespace cimac::testing;

namespace {

constexpr Mode De = Mode::kDesigner;
constexpr Mode Ag = Mode::kAggressive;
constexpr Mode Pa = Mode::kPassive;

Scenario row(int index, int horizon) {
  Scenario s = load_scenario(scenario_path("table1_row" + std::to_string(index) + ".json"));
  s.horizon = horizon;
  return s;
}

void check_identical(const SolvedPolicy& a, const SolvedPolicy& b) {
  REQUIRE(a.horizon() == b.horizon());
  for (int t = 1; t <= a.horizon(); ++t) {
    const BeliefSet& sa = a.beliefs_at(t);
    const BeliefSet& sb = b.beliefs_at(t);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
      REQUIRE(sa[i] == sb[i]);
      REQUIRE(std::memcmp(&a.values_at(t)[i].value, &b.values_at(t)[i].value, sizeof(double)) == 0);
      REQUIRE(a.values_at(t)[i].argmin == b.values_at(t)[i].argmin);
    }
  }
}

struct ThreadsGuard {
  explicit ThreadsGuard(const char* value) { setenv("CIMAC_THREADS", value, 1); }
  ~ThreadsGuard() { unsetenv("CIMAC_THREADS"); }
};

}  // namespace

TEST_CASE("expected stage cost") {
  CHECK(stage_expected_cost(b2(), {0.0, 1.0, 0.3}) == 0.0);
  CHECK(stage_expected_cost(b1(), {1.0, 1.0, 0.0}) == 0.5);
  CHECK(stage_expected_cost(Belief::point_mass({Ag, Ag}), {0.0, 0.5, 0.0}) == 0.5);
}

TEST_CASE("successor distribution") {
  const auto succ = successor_distribution(b1(), {0.0, 1.0, 0.0});
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].action == JointAction({0, 0}));
  CHECK(succ[0].probability == 0.5);
  CHECK(succ[0].belief == b3());
  CHECK(succ[1].action == JointAction({0, 1}));
  CHECK(succ[1].belief == b2());

  const auto single = successor_distribution(b2(), {0.0, 1.0, 0.0});
  REQUIRE(single.size() == 1);
  CHECK(single[0].probability == 1.0);

  const auto four = successor_distribution(Belief::uniform(2), {0.5, 0.5, 0.5});
  REQUIRE(four.size() == 4);
  for (const auto& s : four) CHECK(s.probability == doctest::Approx(0.25));
}

TEST_CASE("reachable sets") {
  const auto sets = enumerate_reachable(make_scenario(b1(), SpaceVariant::kConstrained, 10));
  CHECK(sets.at(1).size() == 1);
  for (int t = 2; t <= 10; ++t) {
    CHECK(sets.at(t).size() == 2);
    CHECK(sets.at(t).contains(b2()));
    CHECK(sets.at(t).contains(b3()));
  }

  const Belief pm = Belief::point_mass({De, Pa});
  for (SpaceVariant space : {SpaceVariant::kConstrained, SpaceVariant::kFull}) {
    const auto point = enumerate_reachable(make_scenario(pm, space, 5));
    for (int t = 1; t <= 5; ++t) {
      CHECK(point.at(t).size() == 1);
      CHECK(point.at(t)[0] == pm);
    }
  }
  const auto one = enumerate_reachable(make_scenario(b1(), SpaceVariant::kConstrained, 1));
  CHECK(one.sets.size() == 1);
  CHECK(one.total() == 1);
}

TEST_CASE("state explosion reports the slot and count") {
  Scenario s = row(3, 10);
  s.max_belief_states = 1000;
  try {
    enumerate_reachable(s);
    FAIL("expected StateExplosion");
  } catch (const StateExplosion& e) {
    CHECK(e.count() > 1000);
    CHECK(e.time_step() >= 2);
    CHECK(std::string(e.what()).find("dedup_rounding") != std::string::npos);
  }
}

TEST_CASE("closed-form values") {
  const auto de_pa = solve(make_scenario(Belief::point_mass({De, Pa}), SpaceVariant::kConstrained, 7));
  CHECK(de_pa.initial_value() == 0.0);
  for (int t = 1; t <= 7; ++t) CHECK(de_pa.values_at(t)[0].argmin.de == 1.0);

  const auto ag_ag = solve(make_scenario(Belief::point_mass({Ag, Ag}), SpaceVariant::kConstrained, 10));
  CHECK(ag_ag.initial_value() == 10.0);

  const auto full = solve(make_scenario(Belief::point_mass({Ag, Ag}), SpaceVariant::kFull, 1));
  CHECK(full.initial_value() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(full.values_at(1)[0].argmin.ag == 0.5);

  const auto row1 = solve(make_scenario(b1(), SpaceVariant::kConstrained, 10));
  CHECK(std::abs(row1.initial_value() - 0.5) <= 1e-9);
}

TEST_CASE("stored prescriptions for the B1 policy") {
  const auto policy = solve(make_scenario(b1(), SpaceVariant::kConstrained, 10));
  CHECK(prescription_at(policy, 2, b2()).de == 0.0);
  CHECK(prescription_at(policy, 2, b3()).de == 1.0);
  CHECK(prescription_at(policy, 1, b1()).de == 0.0);
  CHECK_THROWS_AS(prescription_at(policy, 1, b3()), UnreachableBelief);
  CHECK_THROWS_AS(prescription_at(policy, 11, b3()), UnreachableBelief);
  CHECK(policy.fingerprint() == scenario_fingerprint(policy.scenario()));
}

TEST_CASE("stored values satisfy the Bellman equation and are minimal") {
  const auto policy = solve(row(3, 5));
  const auto candidates = policy.scenario().space().enumerate();
  for (int t = 1; t <= policy.horizon(); ++t) {
    const BeliefSet& beliefs = policy.beliefs_at(t);
    const std::size_t stride = std::max<std::size_t>(1, beliefs.size() / 200);
    for (std::size_t i = 0; i < beliefs.size(); i += stride) {
      const Belief pi = beliefs[i];
      const ValueEntry& entry = policy.values_at(t)[i];
      CHECK(std::abs(bellman_rhs(policy, t, pi, entry.argmin) - entry.value) <= 1e-12);
      CHECK(entry.value >= -1e-12);
      CHECK(entry.value <= policy.horizon() - t + 1 + 1e-12);
      for (const auto& gamma : candidates) {
        CHECK(bellman_rhs(policy, t, pi, gamma) >= entry.value - 1e-12);
      }
    }
  }
}

TEST_CASE("values grow with the horizon") {
  double previous = 0.0;
  for (int T = 1; T <= 5; ++T) {
    const double v = solve(row(2, T)).initial_value();
    CHECK(v >= previous - 1e-12);
    previous = v;
  }
}

TEST_CASE("full space never does worse than constrained") {
  for (int index : {1, 2}) {
    Scenario s = row(index, 2);
    const double constrained = solve(s).initial_value();
    s.prescription_space = SpaceVariant::kFull;
    CHECK(solve(s).initial_value() <= constrained + 1e-12);
  }
}

TEST_CASE("recorded transitions and key lookups give identical policies") {
  const Scenario s = row(3, 6);
  const auto recorded = solve(s);
  const auto lookup = solve(s, 0, SolveOptions{0});
  check_identical(recorded, lookup);
  const auto partial = solve(s, 0, SolveOptions{1000});
  check_identical(recorded, partial);
}

TEST_CASE("worker count does not change the result") {
  const Scenario s = row(4, 6);
  SolvedPolicy one = [&] {
    ThreadsGuard guard("1");
    return solve(s);
  }();
  SolvedPolicy many = [&] {
    ThreadsGuard guard("4");
    return solve(s);
  }();
  check_identical(one, many);
}

TEST_CASE("belief set") {
  BeliefSet set(2, 9);
  CHECK(set.insert(b1()));
  CHECK_FALSE(set.insert(b1()));
  std::vector<double> noisy = b1().probs();
  noisy[1] += 1e-12;
  noisy[2] -= 1e-12;
  CHECK_FALSE(set.insert(Belief(2, noisy)));
  CHECK(set.insert(b2()));
  CHECK(set.size() == 2);
  CHECK(set.find(b2()) == 1);
  CHECK(set.find(b3()) == BeliefSet::npos);
  CHECK(set[0] == b1());
  CHECK(set.key(1) == canonical_key(b2(), 9));
  for (int i = 0; i < 5000; ++i) {
    const double p = static_cast<double>(i) / 5000.0;
    set.insert(Belief(2, {0, p, 1.0 - p, 0, 0, 0, 0, 0, 0}));
  }
  CHECK(set.size() == 5001);
  CHECK(set.find(Belief(2, {0, 0.5, 0.5, 0, 0, 0, 0, 0, 0})) == 0);
  CHECK(set.find(Belief(2, {0, 0.0002, 0.9998, 0, 0, 0, 0, 0, 0})) == 3);
}

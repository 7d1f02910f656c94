#include <doctest.h>

#include <algorithm>

#include "cimac/errors.hpp"
#include "cimac/prescription.hpp"

using namespace cimac;

TEST_CASE("action probability reads the mode's coordinate") {
  const Prescription gamma{0.5, 1.0, 0.05};
  CHECK(action_prob(gamma, Mode::kDesigner, 1) == 0.5);
  CHECK(action_prob(gamma, Mode::kAggressive, 0) == 0.0);
  CHECK(action_prob(gamma, Mode::kPassive, 1) == 0.05);
  CHECK(action_prob(gamma, Mode::kPassive, 0) == 1.0 - 0.05);
}

TEST_CASE("constrained space pins the Ag and Pa coordinates") {
  const auto list = PrescriptionSpace(SpaceVariant::kConstrained, 0.05, 1.0, 0.0).enumerate();
  REQUIRE(list.size() == 21);
  for (std::size_t i = 0; i < list.size(); ++i) {
    CHECK(list[i].ag == 1.0);
    CHECK(list[i].pa == 0.0);
    CHECK(list[i].de == doctest::Approx(0.05 * static_cast<double>(i)).epsilon(1e-12));
  }
  CHECK(list.front().de == 0.0);
  CHECK(list.back().de == 1.0);

  const auto coarse = PrescriptionSpace(SpaceVariant::kConstrained, 0.5, 0.9, 0.1).enumerate();
  REQUIRE(coarse.size() == 3);
  CHECK(coarse[1].de == 0.5);
  CHECK(coarse[1].ag == 0.9);
  CHECK(coarse[1].pa == 0.1);
}

TEST_CASE("full space is the lexicographic Cartesian product") {
  const auto list = PrescriptionSpace(SpaceVariant::kFull, 0.05, 1.0, 0.0).enumerate();
  REQUIRE(list.size() == 9261);
  auto tuple = [](const Prescription& p) { return std::tuple(p.de, p.ag, p.pa); };
  CHECK(std::is_sorted(list.begin(), list.end(),
                       [&](const auto& a, const auto& b) { return tuple(a) < tuple(b); }));
  CHECK(list[1] == Prescription{0.0, 0.0, 0.05});
  CHECK(list[21] == Prescription{0.0, 0.05, 0.0});
}

TEST_CASE("grid step must divide 1") {
  CHECK(grid_divisions(0.05) == 20);
  CHECK(grid_divisions(0.5) == 2);
  CHECK_THROWS_AS(grid_divisions(0.3), InvalidInput);
  CHECK_THROWS_AS(grid_divisions(0.0), InvalidInput);
}

TEST_CASE("batch columns hold transmit and idle probabilities") {
  const std::vector<Prescription> list{{0.25, 1.0, 0.0}, {0.75, 0.5, 0.1}};
  const auto batch = to_batch(list);
  REQUIRE(batch.size() == 2);
  CHECK(batch.column(Mode::kDesigner, 1)[1] == 0.75);
  CHECK(batch.column(Mode::kDesigner, 0)[1] == 0.25);
  CHECK(batch.column(Mode::kPassive, 0)[1] == 1.0 - 0.1);
  CHECK(batch.column(Mode::kAggressive, 1)[0] == 1.0);
}

TEST_CASE("variant names round trip") {
  CHECK(parse_variant("full") == SpaceVariant::kFull);
  CHECK(variant_name(SpaceVariant::kConstrained) == "constrained");
  CHECK_THROWS_AS(parse_variant("partial"), InvalidInput);
}

#include <doctest.h>

#include <cstring>
#include <random>

#include "cimac/belief.hpp"
#include "cimac/kernels.hpp"
#include "cimac/model.hpp"

using namespace cimac;

namespace {

struct Case {
  int agents;
  std::vector<std::uint32_t> support;
  std::vector<double> weights;
  std::vector<std::uint8_t> modes;
  std::vector<Prescription> prescriptions;
  Belief belief;
};

Case random_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Case c;
  c.agents = 2 + static_cast<int>(rng() % 2);
  const std::size_t profiles = num_profiles(c.agents);
  std::vector<double> probs(profiles, 0.0);
  double total = 0.0;
  for (double& p : probs) {
    if (unit(rng) < 0.5) continue;
    p = unit(rng);
    total += p;
  }
  if (total == 0.0) probs[rng() % profiles] = total = 1.0;
  for (double& p : probs) p /= total;
  c.belief = Belief(c.agents, probs);
  for (std::size_t index : c.belief.support()) {
    c.support.push_back(static_cast<std::uint32_t>(index));
    c.weights.push_back(c.belief[index]);
    const ModeProfile m = profile_from_index(index, c.agents);
    for (int i = 0; i < c.agents; ++i) c.modes.push_back(static_cast<std::uint8_t>(m[i]));
  }
  const std::size_t K = 1 + rng() % 37;
  auto coordinate = [&] {
    const double r = unit(rng);
    if (r < 0.2) return 0.0;
    if (r < 0.4) return 1.0;
    if (r < 0.7) return static_cast<double>(rng() % 21) * 0.05;
    return unit(rng);
  };
  for (std::size_t k = 0; k < K; ++k) c.prescriptions.push_back({coordinate(), coordinate(), coordinate()});
  return c;
}

struct Output {
  std::vector<double> joint, probs, cost;
  std::vector<std::vector<double>> succ, keys;
};

Output run(const kernels::KernelTable& table, const Case& c) {
  const auto batch = to_batch(c.prescriptions);
  const std::size_t K = batch.size();
  const std::size_t d = c.support.size();
  const std::size_t actions = num_joint_actions(c.agents);
  Output out;
  out.joint.resize(actions * d * K);
  out.probs.resize(actions * K);
  out.cost.resize(K);
  const kernels::SupportView view{c.agents, c.weights, c.modes};
  table.joint_action_probs(view, batch, out.joint, out.probs, out.cost);
  for (std::size_t u = 0; u < actions; ++u) {
    std::vector<double> succ(d * K), keys(d * K);
    table.successor_rows(d, {out.joint.data() + u * d * K, d * K}, {out.probs.data() + u * K, K},
                         1e9, succ, keys);
    out.succ.push_back(std::move(succ));
    out.keys.push_back(std::move(keys));
  }
  return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels agree with the belief module bit for bit") {
  std::mt19937_64 rng(7);
  const auto& scalar = kernels::kernels_for(kernels::Isa::kScalar);
  for (int trial = 0; trial < 300; ++trial) {
    const Case c = random_case(rng);
    const Output out = run(scalar, c);
    const std::size_t K = c.prescriptions.size();
    const std::size_t d = c.support.size();
    for (std::size_t k = 0; k < K; ++k) {
      double expected_cost = 0.0;
      for (std::size_t u = 0; u < num_joint_actions(c.agents); ++u) {
        const JointAction action = JointAction::from_index(u, c.agents);
        const double p = observation_probability(c.belief, c.prescriptions[k], action);
        CHECK(out.probs[u * K + k] == p);
        expected_cost += stage_cost_for(action.transmitters()) * p;
        if (p == 0.0) continue;
        const Belief next = update(c.belief, c.prescriptions[k], action);
        for (std::size_t s = 0; s < d; ++s) {
          CHECK(out.succ[u][s * K + k] == next[c.support[s]]);
        }
      }
      CHECK(out.cost[k] == doctest::Approx(expected_cost).epsilon(1e-14));
    }
  }
}

TEST_CASE("every available variant matches the scalar reference bit for bit") {
  const auto& scalar = kernels::kernels_for(kernels::Isa::kScalar);
  for (kernels::Isa isa : {kernels::Isa::kAvx2}) {
    if (!kernels::isa_available(isa)) {
      MESSAGE("skipping unavailable variant " << kernels::isa_name(isa));
      continue;
    }
    const auto& table = kernels::kernels_for(isa);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
      const Case c = random_case(rng);
      const Output a = run(scalar, c);
      const Output b = run(table, c);
      CHECK(same_bits(a.joint, b.joint));
      CHECK(same_bits(a.probs, b.probs));
      CHECK(same_bits(a.cost, b.cost));
      for (std::size_t u = 0; u < a.succ.size(); ++u) {
        CHECK(same_bits(a.succ[u], b.succ[u]));
        CHECK(same_bits(a.keys[u], b.keys[u]));
      }
    }
  }
}

TEST_CASE("decimal scale") {
  CHECK(kernels::decimal_scale(0) == 1.0);
  CHECK(kernels::decimal_scale(9) == 1e9);
  CHECK_THROWS(kernels::decimal_scale(16));
  CHECK(kernels::kernels_for(kernels::Isa::kScalar).isa == kernels::Isa::kScalar);
}

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cimac/belief.hpp"
#include "cimac/prescription.hpp"

namespace cimac {

// Designer-mode heuristic: stay silent when the peer is Aggressive with
// probability above x, transmit when it is Passive with probability above y,
// otherwise transmit with probability z. Thresholds above 1 never trigger.
struct ThresholdParams {
  double x = 1.1;
  double y = 1.1;
  double z = 0.0;

  // "policy-(x,y,z)"
  std::string label() const;

  friend bool operator==(const ThresholdParams&, const ThresholdParams&) = default;
};

ThresholdParams parse_threshold_triple(const std::string& text);  // "x,y,z"

struct LabeledBelief {
  std::string id;
  Belief belief;
};

// A full problem instance. Several initial beliefs may share one set of
// parameters (a comparison table); solving and evaluation address one of
// them at a time.
struct Scenario {
  int agents = 2;
  int horizon = 10;
  double alpha = 1.0;
  double beta = 0.0;
  double grid_step = 0.05;
  SpaceVariant prescription_space = SpaceVariant::kFull;
  std::vector<LabeledBelief> initial_beliefs;
  std::vector<ThresholdParams> baselines;
  int dedup_rounding = 9;
  std::size_t max_belief_states = 2'000'000;

  const Belief& initial_belief() const { return initial_beliefs.at(0).belief; }
  PrescriptionSpace space() const {
    return PrescriptionSpace(prescription_space, grid_step, alpha, beta);
  }

  // Copy restricted to the belief at `index`.
  Scenario with_belief(std::size_t index) const;
  std::size_t belief_index(const std::string& id) const;

  // Throws InvalidInput on any broken invariant.
  void validate() const;
};

// Recognised keys: agents, horizon, alpha, beta, grid_step,
// prescription_space, initial_belief (array) or initial_beliefs (array of
// {id, belief}), belief_id, baselines, dedup_rounding, max_belief_states.
// Throws ParseError.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

// Content hash (16 hex digits) of the parameters that determine a solution:
// agents, horizon, alpha, beta, grid_step, prescription_space,
// dedup_rounding and the first initial belief.
std::string scenario_fingerprint(const Scenario& scenario);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace cimac

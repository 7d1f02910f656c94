#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cimac/belief.hpp"
#include "cimac/model.hpp"
#include "cimac/policies.hpp"
#include "cimac/scenario.hpp"

namespace cimac {

struct EpisodeStep {
  JointAction action;
  int cost = 0;
  // Common belief after observing `action`.
  Belief belief;
};

struct EpisodeTrace {
  ModeProfile profile;
  Belief initial_belief;
  std::vector<EpisodeStep> steps;

  int total_cost() const;
};

enum class Method { kExact, kMonteCarlo };
std::string_view method_name(Method method);  // "exact" | "mc"

struct CostReport {
  std::string policy;
  std::string belief_id;
  Method method = Method::kExact;
  double expected_cost = 0.0;
  std::optional<std::size_t> episodes;
  std::optional<double> standard_error;
  std::optional<std::uint64_t> seed;
  // Non-empty when the row failed; expected_cost is then meaningless.
  std::string error;

  bool ok() const { return error.empty(); }
};

struct ExactOptions {
  // Cap on expanded (slot, belief, action) edges over all mode profiles.
  std::size_t max_branches = 50'000'000;
};

struct ExactResult {
  double expected_cost = 0.0;
  // Total probability of the enumerated complete histories, per profile in
  // the initial support (ascending profile index). Each is 1 up to rounding.
  std::vector<double> history_mass;
  std::size_t branches = 0;
};

// Exact expected cumulative cost over all positive-probability action
// histories, for every mode profile in the support of `initial`. Histories
// that reach the same (slot, belief) share one evaluation. Throws
// ExplosionError once more than options.max_branches edges are expanded.
ExactResult exact_cost_detailed(const ExecutablePolicy& policy, const Belief& initial,
                                int horizon, const ExactOptions& options = {});

double exact_cost(const ExecutablePolicy& policy, const Scenario& scenario,
                  std::size_t belief_index = 0, const ExactOptions& options = {});

// Runs one decentralized episode. slot_randoms holds horizon x agents values
// in (0, 1], slot-major; agent i transmits at slot t iff K[t][i] <= its
// transmit probability.
EpisodeTrace simulate_episode(const ExecutablePolicy& policy, const Belief& initial, int horizon,
                              const ModeProfile& true_profile,
                              std::span<const double> slot_randoms);

// Deterministic per-episode seed: splitmix64 finalizer applied to
// master_seed + (episode + 1) * 0x9e3779b97f4a7c15.
std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t episode);

// Per-episode randomness: profile draw first, then horizon x agents slot
// uniforms in (0, 1].
struct EpisodeRandomness {
  ModeProfile profile;
  std::vector<double> slot_randoms;
};
EpisodeRandomness draw_episode(const Belief& initial, int horizon, std::uint64_t seed);

CostReport monte_carlo_cost(const ExecutablePolicy& policy, const Scenario& scenario,
                            std::size_t episodes, std::uint64_t master_seed,
                            std::size_t belief_index = 0);

// Table of exact costs, one row per (policy, initial belief): the solved
// policy's rows first when requested, then each baseline's rows in scenario
// order. A failing row carries its error and the remaining rows still run.
std::vector<CostReport> compare(const Scenario& scenario, bool include_optimal,
                                const ExactOptions& options = {});

// CSV rendering: policy,belief_id,method,expected_cost,episodes,stderr,seed
std::string csv_header(bool with_error_column);
std::string csv_row(const CostReport& report, bool with_error_column);

}  // namespace cimac

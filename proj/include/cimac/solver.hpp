#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cimac/belief.hpp"
#include "cimac/belief_set.hpp"
#include "cimac/model.hpp"
#include "cimac/prescription.hpp"
#include "cimac/scenario.hpp"

namespace cimac {

// Expected one-slot team cost of applying gamma to every agent under pi.
double stage_expected_cost(const Belief& pi, const Prescription& gamma);

struct Successor {
  JointAction action;
  double probability = 0.0;
  Belief belief;
};

// One entry per joint action with positive probability, in joint-action
// index order; each belief is update(pi, gamma, action).
std::vector<Successor> successor_distribution(const Belief& pi, const Prescription& gamma);

// sets[t - 1] holds the beliefs reachable at slot t, t = 1..T.
struct ReachableSets {
  std::vector<BeliefSet> sets;

  const BeliefSet& at(int t) const { return sets.at(static_cast<std::size_t>(t - 1)); }
  std::size_t total() const;
};

// Breadth-first forward pass from the scenario's first initial belief under
// every enumerated prescription. Throws StateExplosion once more than
// max_belief_states beliefs are stored in total.
ReachableSets enumerate_reachable(const Scenario& scenario);

struct ValueEntry {
  double value = 0.0;
  Prescription argmin;
};

// Self-contained result of backward induction: for every reachable belief at
// every slot, its optimal expected remaining cost and minimizing
// prescription.
class SolvedPolicy {
 public:
  SolvedPolicy(Scenario scenario, ReachableSets reachable,
               std::vector<std::vector<ValueEntry>> values);

  // Scenario restricted to the solved initial belief.
  const Scenario& scenario() const { return scenario_; }
  const std::string& fingerprint() const { return fingerprint_; }
  int horizon() const { return scenario_.horizon; }
  const ReachableSets& reachable() const { return reachable_; }

  const BeliefSet& beliefs_at(int t) const { return reachable_.at(t); }
  const std::vector<ValueEntry>& values_at(int t) const;

  // Index of pi in the support at slot t; throws UnreachableBelief.
  std::size_t locate(int t, const Belief& pi) const;

  // V_1 at the initial belief.
  double initial_value() const;

 private:
  Scenario scenario_;
  std::string fingerprint_;
  ReachableSets reachable_;
  std::vector<std::vector<ValueEntry>> values_;
};

// Ties between prescriptions whose values differ by at most this much go to
// the earlier one in enumeration order.
inline constexpr double kTieTolerance = 1e-12;

struct SolveOptions {
  // The forward pass records the successor index of every expanded
  // (belief, prescription, action) so backward induction needs no key
  // lookups. Past this many records it stops and successors are looked up.
  std::size_t max_recorded_transitions = std::size_t{64} << 20;
};

// Backward induction over the reachable sets of `scenario`'s belief at
// `belief_index`.
SolvedPolicy solve(const Scenario& scenario, std::size_t belief_index = 0,
                   const SolveOptions& options = {});

// Stored minimizer at slot t; throws UnreachableBelief when pi is not in the
// solved support.
const Prescription& prescription_at(const SolvedPolicy& policy, int t, const Belief& pi);

// Right side of the Bellman equation at (t, pi) for a given prescription,
// using the stored values at t + 1. Independent of the batch kernels.
double bellman_rhs(const SolvedPolicy& policy, int t, const Belief& pi,
                   const Prescription& gamma);

}  // namespace cimac

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cimac/belief.hpp"
#include "cimac/model.hpp"
#include "cimac/prescription.hpp"
#include "cimac/scenario.hpp"
#include "cimac/solver.hpp"

namespace cimac {

// What agent `agent` knows at slot `time`: its own mode and the common
// belief, which every agent computes identically from the shared history.
struct AgentState {
  int agent = 0;
  Mode own_mode = Mode::kDesigner;
  Belief common_belief;
  int time = 1;
};

// A symmetric strategy executed from common information. Implementations
// are immutable after construction.
class ExecutablePolicy {
 public:
  virtual ~ExecutablePolicy() = default;

  virtual std::string label() const = 0;

  // Prescription governing each agent at slot t (one entry per agent).
  virtual std::vector<Prescription> prescriptions(int t, const Belief& pi) const = 0;

  // Common belief after observing u at slot t.
  virtual Belief next_belief(int t, const Belief& pi, const JointAction& u) const = 0;

  double transmit_probability(const AgentState& state) const;
};

// Decentralized execution of a solved coordinator policy: every agent looks
// up the same prescription for the common belief and applies it to its own
// mode.
class OptimalPolicy final : public ExecutablePolicy {
 public:
  explicit OptimalPolicy(std::shared_ptr<const SolvedPolicy> solved);

  std::string label() const override { return "proposed"; }
  std::vector<Prescription> prescriptions(int t, const Belief& pi) const override;
  Belief next_belief(int t, const Belief& pi, const JointAction& u) const override;

  const SolvedPolicy& solved() const { return *solved_; }

 private:
  std::shared_ptr<const SolvedPolicy> solved_;
};

// Transmit probability of the agent under the solved policy.
double optimal_act(const SolvedPolicy& policy, const AgentState& state);

// Belief recursion under the solved prescription. The update starts from the
// stored representative of pi so that successors stay on the solved support.
Belief optimal_belief_step(const SolvedPolicy& policy, const Belief& pi, int t,
                           const JointAction& observed);

// Threshold baseline for two agents. Aggressive and Passive agents transmit
// with alpha and beta; a Designer agent applies the (x, y, z) rule to the
// conditional distribution of its peer's mode.
class ThresholdPolicy final : public ExecutablePolicy {
 public:
  ThresholdPolicy(ThresholdParams params, double alpha, double beta);

  std::string label() const override { return params_.label(); }
  std::vector<Prescription> prescriptions(int t, const Belief& pi) const override;
  Belief next_belief(int t, const Belief& pi, const JointAction& u) const override;

  const ThresholdParams& params() const { return params_; }

 private:
  ThresholdParams params_;
  double alpha_;
  double beta_;
};

// Throws Unsupported unless the belief covers exactly two agents.
double threshold_act(const ThresholdParams& params, double alpha, double beta,
                     const AgentState& state);

Belief threshold_belief_step(const ThresholdParams& params, const Belief& pi,
                             const JointAction& observed, const Scenario& scenario);

}  // namespace cimac

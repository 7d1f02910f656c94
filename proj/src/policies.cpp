#include "cimac/policies.hpp"

#include "cimac/errors.hpp"

namespace cimac {

double ExecutablePolicy::transmit_probability(const AgentState& state) const {
  const auto per_agent = prescriptions(state.time, state.common_belief);
  return action_prob(per_agent.at(state.agent), state.own_mode, 1);
}

// OptimalPolicy ----------------------------------------------------------------

OptimalPolicy::OptimalPolicy(std::shared_ptr<const SolvedPolicy> solved)
    : solved_(std::move(solved)) {
  if (!solved_) throw InvalidInput("optimal policy needs a solved table");
}

std::vector<Prescription> OptimalPolicy::prescriptions(int t, const Belief& pi) const {
  return std::vector<Prescription>(pi.agents(), prescription_at(*solved_, t, pi));
}

Belief OptimalPolicy::next_belief(int t, const Belief& pi, const JointAction& u) const {
  return optimal_belief_step(*solved_, pi, t, u);
}

double optimal_act(const SolvedPolicy& policy, const AgentState& state) {
  return action_prob(prescription_at(policy, state.time, state.common_belief), state.own_mode, 1);
}

Belief optimal_belief_step(const SolvedPolicy& policy, const Belief& pi, int t,
                           const JointAction& observed) {
  const std::size_t index = policy.locate(t, pi);
  const Belief stored = policy.beliefs_at(t)[index];
  return update(stored, policy.values_at(t)[index].argmin, observed);
}

// ThresholdPolicy ----------------------------------------------------------------

ThresholdPolicy::ThresholdPolicy(ThresholdParams params, double alpha, double beta)
    : params_(params), alpha_(alpha), beta_(beta) {}

double threshold_act(const ThresholdParams& params, double alpha, double beta,
                     const AgentState& state) {
  if (state.common_belief.agents() != 2) {
    throw Unsupported("threshold baselines are defined for two agents only");
  }
  switch (state.own_mode) {
    case Mode::kAggressive:
      return alpha;
    case Mode::kPassive:
      return beta;
    case Mode::kDesigner:
      break;
  }
  if (marginal(state.common_belief, state.agent)[0] == 0.0) {
    // The agent cannot be a Designer under this belief; the value is never
    // used to draw an action.
    return params.z;
  }
  const Belief peer = conditional_on_own_mode(state.common_belief, state.agent, Mode::kDesigner);
  if (peer[static_cast<std::size_t>(Mode::kAggressive)] > params.x) return 0.0;
  if (peer[static_cast<std::size_t>(Mode::kPassive)] > params.y) return 1.0;
  return params.z;
}

std::vector<Prescription> ThresholdPolicy::prescriptions(int t, const Belief& pi) const {
  std::vector<Prescription> out;
  out.reserve(pi.agents());
  for (int agent = 0; agent < pi.agents(); ++agent) {
    const double designer =
        threshold_act(params_, alpha_, beta_, AgentState{agent, Mode::kDesigner, pi, t});
    out.push_back({designer, alpha_, beta_});
  }
  return out;
}

Belief ThresholdPolicy::next_belief(int t, const Belief& pi, const JointAction& u) const {
  return update(pi, prescriptions(t, pi), u);
}

Belief threshold_belief_step(const ThresholdParams& params, const Belief& pi,
                             const JointAction& observed, const Scenario& scenario) {
  return ThresholdPolicy(params, scenario.alpha, scenario.beta).next_belief(1, pi, observed);
}

}  // namespace cimac

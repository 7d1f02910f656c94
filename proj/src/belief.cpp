#include "cimac/belief.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "cimac/errors.hpp"
#include "cimac/kernels.hpp"

namespace cimac {

Belief::Belief(int agents, std::vector<double> probs) : agents_(agents), probs_(std::move(probs)) {
  if (agents < 1) throw InvalidInput("belief needs at least one agent");
  if (probs_.size() != num_profiles(agents)) {
    throw InvalidInput("belief has " + std::to_string(probs_.size()) + " entries, expected " +
                       std::to_string(num_profiles(agents)));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidInput("belief entries must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kBeliefSumTolerance) {
    throw InvalidInput("belief entries sum to " + std::to_string(sum) + ", not 1");
  }
}

Belief Belief::point_mass(const ModeProfile& m) {
  std::vector<double> probs(num_profiles(m.agents()), 0.0);
  probs[profile_index(m)] = 1.0;
  return Belief(m.agents(), std::move(probs), Unchecked{});
}

Belief Belief::uniform(int agents) {
  const std::size_t count = num_profiles(agents);
  return Belief(agents, std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

double Belief::at(const ModeProfile& m) const { return probs_[profile_index(m)]; }

std::vector<std::size_t> Belief::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] > 0.0) out.push_back(i);
  }
  return out;
}

std::string Belief::render() const {
  char buf[32];
  std::string out;
  if (agents_ == 2) {
    out = "         De       Ag       Pa\n";
    for (int row = 0; row < kNumModes; ++row) {
      out += mode_name(kAllModes[row]);
      for (int col = 0; col < kNumModes; ++col) {
        std::snprintf(buf, sizeof(buf), " %8.4f", probs_[row * kNumModes + col]);
        out += buf;
      }
      out += '\n';
    }
    return out;
  }
  out = "[";
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), i == 0 ? "%.4f" : ", %.4f", probs_[i]);
    out += buf;
  }
  out += "]";
  return out;
}

Belief normalize_weights(int agents, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw ImpossibleObservation("observed joint action has zero probability under the belief");
  }
  for (double& w : weights) w /= total;
  return Belief(agents, std::move(weights), Belief::Unchecked{});
}

namespace {

const Prescription& prescription_for(std::span<const Prescription> per_agent, int agent) {
  return per_agent.size() == 1 ? per_agent[0] : per_agent[agent];
}

void check_shapes(const Belief& pi, std::span<const Prescription> per_agent,
                  const JointAction& u) {
  if (u.agents() != pi.agents()) {
    throw InvalidInput("joint action length does not match the belief's agent count");
  }
  if (per_agent.size() != 1 && per_agent.size() != static_cast<std::size_t>(pi.agents())) {
    throw InvalidInput("need one prescription, or one per agent");
  }
}

// Likelihood of u for every profile, multiplied into the prior.
std::vector<double> joint_weights(const Belief& pi, std::span<const Prescription> per_agent,
                                  const JointAction& u) {
  check_shapes(pi, per_agent, u);
  const int n = pi.agents();
  std::vector<double> weights(pi.size(), 0.0);
  for (std::size_t index = 0; index < pi.size(); ++index) {
    if (pi[index] == 0.0) continue;
    // Decode the profile on the fly; agent n-1 is the least significant digit.
    double likelihood = 1.0;
    std::size_t rest = index;
    for (int agent = n - 1; agent >= 0; --agent) {
      const Mode mode = static_cast<Mode>(rest % kNumModes);
      rest /= kNumModes;
      likelihood *= action_prob(prescription_for(per_agent, agent), mode, u[agent]);
    }
    weights[index] = pi[index] * likelihood;
  }
  return weights;
}

}  // namespace

double observation_probability(const Belief& pi, std::span<const Prescription> per_agent,
                               const JointAction& u) {
  double total = 0.0;
  for (double w : joint_weights(pi, per_agent, u)) total += w;
  return total;
}

double observation_probability(const Belief& pi, const Prescription& gamma,
                               const JointAction& u) {
  return observation_probability(pi, std::span<const Prescription>(&gamma, 1), u);
}

Belief update(const Belief& pi, std::span<const Prescription> per_agent, const JointAction& u) {
  return normalize_weights(pi.agents(), joint_weights(pi, per_agent, u));
}

Belief update(const Belief& pi, const Prescription& gamma, const JointAction& u) {
  return update(pi, std::span<const Prescription>(&gamma, 1), u);
}

ModeDistribution marginal(const Belief& pi, int agent) {
  if (agent < 0 || agent >= pi.agents()) throw InvalidInput("agent index out of range");
  ModeDistribution out{0.0, 0.0, 0.0};
  std::size_t stride = 1;
  for (int i = pi.agents() - 1; i > agent; --i) stride *= kNumModes;
  for (std::size_t index = 0; index < pi.size(); ++index) {
    out[(index / stride) % kNumModes] += pi[index];
  }
  return out;
}

Belief conditional_on_own_mode(const Belief& pi, int agent, Mode mode) {
  if (agent < 0 || agent >= pi.agents()) throw InvalidInput("agent index out of range");
  if (pi.agents() < 2) throw InvalidInput("conditioning needs at least two agents");
  const int n = pi.agents();
  std::vector<double> weights(num_profiles(n - 1), 0.0);
  for (std::size_t index = 0; index < pi.size(); ++index) {
    if (pi[index] == 0.0) continue;
    ModeProfile m = profile_from_index(index, n);
    if (m[agent] != mode) continue;
    std::vector<Mode> rest;
    rest.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
      if (i != agent) rest.push_back(m[i]);
    }
    weights[profile_index(ModeProfile(std::move(rest)))] += pi[index];
  }
  try {
    return normalize_weights(n - 1, std::move(weights));
  } catch (const ImpossibleObservation&) {
    throw ImpossibleObservation("agent " + std::to_string(agent + 1) + " has zero probability of mode " +
                                std::string(mode_name(mode)));
  }
}

std::size_t BeliefKeyHash::operator()(const BeliefKey& key) const noexcept {
  // FNV-1a over the 64-bit entries.
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t v : key.entries) {
    auto bits = static_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return static_cast<std::size_t>(h);
}

BeliefKey canonical_key(const Belief& pi, int digits) {
  if (digits < 0 || digits > kMaxDedupRounding) {
    throw InvalidInput("dedup_rounding must lie in [0, " + std::to_string(kMaxDedupRounding) + "]");
  }
  const double scale = kernels::decimal_scale(digits);
  BeliefKey key;
  key.entries.reserve(pi.size());
  for (double p : pi.probs()) {
    key.entries.push_back(static_cast<std::int64_t>(std::nearbyint(p * scale)));
  }
  return key;
}

}  // namespace cimac

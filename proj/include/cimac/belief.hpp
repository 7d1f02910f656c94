#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cimac/model.hpp"
#include "cimac/prescription.hpp"

namespace cimac {

inline constexpr double kBeliefSumTolerance = 1e-9;

// Distribution over the 3^n mode profiles, indexed by profile_index.
class Belief {
 public:
  Belief() = default;

  // Validates length, non-negativity and that the entries sum to 1 within
  // kBeliefSumTolerance. Throws InvalidInput otherwise.
  Belief(int agents, std::vector<double> probs);

  static Belief point_mass(const ModeProfile& m);
  static Belief uniform(int agents);

  int agents() const { return agents_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t profile) const { return probs_[profile]; }
  double at(const ModeProfile& m) const;
  const std::vector<double>& probs() const { return probs_; }

  // Profile indices with positive mass, ascending.
  std::vector<std::size_t> support() const;

  // 3x3 matrix for two agents (rows: agent 1 De/Ag/Pa), flat list otherwise.
  std::string render() const;

  friend bool operator==(const Belief&, const Belief&) = default;

 private:
  struct Unchecked {};
  Belief(int agents, std::vector<double> probs, Unchecked)
      : agents_(agents), probs_(std::move(probs)) {}

  friend Belief normalize_weights(int agents, std::vector<double> weights);

  int agents_ = 0;
  std::vector<double> probs_;
};

// Divides by the total mass. Throws ImpossibleObservation when it is zero.
Belief normalize_weights(int agents, std::vector<double> weights);

// Probability of joint action u under belief pi when agent i follows
// per_agent[i]. A single-element span applies the same prescription to all.
double observation_probability(const Belief& pi, std::span<const Prescription> per_agent,
                               const JointAction& u);
double observation_probability(const Belief& pi, const Prescription& gamma,
                               const JointAction& u);

// Bayes posterior: new(m) proportional to pi(m) * prod_i gamma(m^i; u^i).
Belief update(const Belief& pi, const Prescription& gamma, const JointAction& u);

// Same recursion when agents are under different prescriptions (used by the
// threshold baselines, whose Designer behaviour depends on the agent).
Belief update(const Belief& pi, std::span<const Prescription> per_agent, const JointAction& u);

using ModeDistribution = std::array<double, kNumModes>;

ModeDistribution marginal(const Belief& pi, int agent);

// Distribution of the remaining agents' profile given that `agent` has
// `mode`; a belief over n-1 agents in the same layout.
Belief conditional_on_own_mode(const Belief& pi, int agent, Mode mode);

// Entries rounded to a fixed number of decimal digits.
struct BeliefKey {
  std::vector<std::int64_t> entries;

  friend bool operator==(const BeliefKey&, const BeliefKey&) = default;
};

struct BeliefKeyHash {
  std::size_t operator()(const BeliefKey& key) const noexcept;
};

inline constexpr int kMaxDedupRounding = 15;

BeliefKey canonical_key(const Belief& pi, int digits);

}  // namespace cimac

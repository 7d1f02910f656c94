#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cimac {

// The enumeration order is the indexing order used everywhere: belief
// layout, prescription coordinates, matrix rendering.
enum class Mode : std::uint8_t { kDesigner = 0, kAggressive = 1, kPassive = 2 };

inline constexpr int kNumModes = 3;
inline constexpr Mode kAllModes[kNumModes] = {Mode::kDesigner, Mode::kAggressive,
                                              Mode::kPassive};

std::string_view mode_name(Mode mode);  // "De", "Ag", "Pa"
Mode parse_mode(std::string_view text);

// 3^n, the number of joint mode profiles for n agents.
std::size_t num_profiles(int agents);
// 2^n, the number of joint actions for n agents.
std::size_t num_joint_actions(int agents);

// The hidden joint state: one mode per agent, agent 1 first.
class ModeProfile {
 public:
  ModeProfile() = default;
  explicit ModeProfile(std::vector<Mode> modes) : modes_(std::move(modes)) {}
  ModeProfile(std::initializer_list<Mode> modes) : modes_(modes) {}

  int agents() const { return static_cast<int>(modes_.size()); }
  Mode operator[](int agent) const { return modes_[agent]; }
  const std::vector<Mode>& modes() const { return modes_; }

  // Comma separated list, e.g. "De,Ag".
  static ModeProfile parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const ModeProfile&, const ModeProfile&) = default;

 private:
  std::vector<Mode> modes_;
};

// One binary action per agent; 1 = transmit, 0 = idle.
class JointAction {
 public:
  JointAction() = default;
  explicit JointAction(std::vector<std::uint8_t> actions);
  JointAction(std::initializer_list<int> actions);

  int agents() const { return static_cast<int>(actions_.size()); }
  int operator[](int agent) const { return actions_[agent]; }
  int transmitters() const;

  // Binary encoding with agent 1 as the most significant bit.
  std::size_t index() const;
  static JointAction from_index(std::size_t index, int agents);

  std::string to_string() const;  // e.g. "01"

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<std::uint8_t> actions_;
};

// Per-slot team cost: 0 when exactly one agent transmits, 1 on collision or
// idle channel. Independent of the modes.
int stage_cost(const ModeProfile& m, const JointAction& u);

// Cost as a function of the number of transmitters only.
inline int stage_cost_for(int transmitters) { return transmitters == 1 ? 0 : 1; }

// Base-3 row-major index, agent 1 most significant.
std::size_t profile_index(const ModeProfile& m);
ModeProfile profile_from_index(std::size_t index, int agents);

}  // namespace cimac

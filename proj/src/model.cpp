#include "cimac/model.hpp"

#include <string>

#include "cimac/errors.hpp"

namespace cimac {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kDesigner:
      return "De";
    case Mode::kAggressive:
      return "Ag";
    case Mode::kPassive:
      return "Pa";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "De") return Mode::kDesigner;
  if (text == "Ag") return Mode::kAggressive;
  if (text == "Pa") return Mode::kPassive;
  throw InvalidInput("unknown mode '" + std::string(text) + "' (expected De, Ag or Pa)");
}

std::size_t num_profiles(int agents) {
  std::size_t count = 1;
  for (int i = 0; i < agents; ++i) count *= kNumModes;
  return count;
}

std::size_t num_joint_actions(int agents) { return std::size_t{1} << agents; }

ModeProfile ModeProfile::parse(std::string_view text) {
  std::vector<Mode> modes;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    modes.push_back(parse_mode(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return ModeProfile(std::move(modes));
}

std::string ModeProfile::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (i > 0) out += ',';
    out += mode_name(modes_[i]);
  }
  return out;
}

JointAction::JointAction(std::vector<std::uint8_t> actions) : actions_(std::move(actions)) {
  for (auto a : actions_) {
    if (a > 1) throw InvalidInput("joint action entries must be 0 or 1");
  }
}

JointAction::JointAction(std::initializer_list<int> actions) {
  actions_.reserve(actions.size());
  for (int a : actions) {
    if (a != 0 && a != 1) throw InvalidInput("joint action entries must be 0 or 1");
    actions_.push_back(static_cast<std::uint8_t>(a));
  }
}

int JointAction::transmitters() const {
  int count = 0;
  for (auto a : actions_) count += a;
  return count;
}

std::size_t JointAction::index() const {
  std::size_t index = 0;
  for (auto a : actions_) index = (index << 1) | a;
  return index;
}

JointAction JointAction::from_index(std::size_t index, int agents) {
  if (index >= num_joint_actions(agents)) {
    throw InvalidInput("joint action index out of range");
  }
  std::vector<std::uint8_t> actions(agents);
  for (int i = agents - 1; i >= 0; --i) {
    actions[i] = static_cast<std::uint8_t>(index & 1);
    index >>= 1;
  }
  return JointAction(std::move(actions));
}

std::string JointAction::to_string() const {
  std::string out;
  for (auto a : actions_) out += static_cast<char>('0' + a);
  return out;
}

int stage_cost(const ModeProfile& m, const JointAction& u) {
  if (m.agents() != u.agents()) {
    throw InvalidInput("mode profile and joint action lengths differ");
  }
  return stage_cost_for(u.transmitters());
}

std::size_t profile_index(const ModeProfile& m) {
  std::size_t index = 0;
  for (Mode mode : m.modes()) index = index * kNumModes + static_cast<std::size_t>(mode);
  return index;
}

ModeProfile profile_from_index(std::size_t index, int agents) {
  if (agents < 1 || index >= num_profiles(agents)) {
    throw InvalidInput("profile index " + std::to_string(index) + " out of range for " +
                       std::to_string(agents) + " agents");
  }
  std::vector<Mode> modes(agents);
  for (int i = agents - 1; i >= 0; --i) {
    modes[i] = static_cast<Mode>(index % kNumModes);
    index /= kNumModes;
  }
  return ModeProfile(std::move(modes));
}

}  // namespace cimac

#include "cimac/errors.hpp"

#include <string>

namespace cimac {

StateExplosion::StateExplosion(int time_step, std::size_t count, std::size_t cap)
    : Error("reachable belief set exceeded max_belief_states=" + std::to_string(cap) +
            " while expanding time step " + std::to_string(time_step) + " (" +
            std::to_string(count) +
            " beliefs stored); use a coarser dedup_rounding, a shorter horizon, "
            "the constrained prescription space, or raise max_belief_states"),
      time_step_(time_step),
      count_(count) {}

}  // namespace cimac

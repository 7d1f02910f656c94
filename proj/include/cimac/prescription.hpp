#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cimac/model.hpp"

namespace cimac {

// Map from an agent's own mode to its transmit probability. There is no
// agent index: every agent receives the same prescription.
struct Prescription {
  double de = 0.0;
  double ag = 0.0;
  double pa = 0.0;

  double transmit(Mode mode) const {
    switch (mode) {
      case Mode::kDesigner:
        return de;
      case Mode::kAggressive:
        return ag;
      case Mode::kPassive:
        return pa;
    }
    return 0.0;
  }

  friend bool operator==(const Prescription&, const Prescription&) = default;
};

// Probability that an agent in `mode` takes `action` (1 transmit, 0 idle).
inline double action_prob(const Prescription& gamma, Mode mode, int action) {
  const double p = gamma.transmit(mode);
  return action == 1 ? p : 1.0 - p;
}

enum class SpaceVariant { kConstrained, kFull };

std::string_view variant_name(SpaceVariant variant);
SpaceVariant parse_variant(std::string_view text);

// Structure-of-arrays copy of a prescription list, the layout the batch
// kernels consume. The idle columns hold 1 - p, computed once.
struct PrescriptionBatch {
  std::vector<double> de;
  std::vector<double> ag;
  std::vector<double> pa;
  std::vector<double> idle_de;
  std::vector<double> idle_ag;
  std::vector<double> idle_pa;

  std::size_t size() const { return de.size(); }
  const double* transmit(Mode mode) const {
    switch (mode) {
      case Mode::kDesigner:
        return de.data();
      case Mode::kAggressive:
        return ag.data();
      case Mode::kPassive:
        return pa.data();
    }
    return nullptr;
  }
  const double* idle(Mode mode) const {
    switch (mode) {
      case Mode::kDesigner:
        return idle_de.data();
      case Mode::kAggressive:
        return idle_ag.data();
      case Mode::kPassive:
        return idle_pa.data();
    }
    return nullptr;
  }
  // transmit(mode) when action is 1, idle(mode) otherwise.
  const double* column(Mode mode, unsigned action) const {
    return action ? transmit(mode) : idle(mode);
  }
};

// The quantized set the coordinator optimizes over.
class PrescriptionSpace {
 public:
  // grid_step must divide 1 to within 1e-12. alpha and beta are only used by
  // the constrained variant and need not be grid points.
  PrescriptionSpace(SpaceVariant variant, double grid_step, double alpha, double beta);

  SpaceVariant variant() const { return variant_; }
  const std::vector<double>& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // Lexicographic in (de, ag, pa), ascending. The order is the solver's
  // tie-breaking order.
  std::vector<Prescription> enumerate() const;

 private:
  SpaceVariant variant_;
  std::vector<double> grid_;
  double alpha_;
  double beta_;
};

// Number of grid intervals for a step, e.g. 20 for 0.05.
int grid_divisions(double grid_step);

PrescriptionBatch to_batch(const std::vector<Prescription>& prescriptions);

}  // namespace cimac

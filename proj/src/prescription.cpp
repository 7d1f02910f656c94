#include "cimac/prescription.hpp"

#include <cmath>
#include <string>

#include "cimac/errors.hpp"

namespace cimac {

std::string_view variant_name(SpaceVariant variant) {
  return variant == SpaceVariant::kFull ? "full" : "constrained";
}

SpaceVariant parse_variant(std::string_view text) {
  if (text == "constrained") return SpaceVariant::kConstrained;
  if (text == "full") return SpaceVariant::kFull;
  throw InvalidInput("unknown prescription space '" + std::string(text) +
                     "' (expected constrained or full)");
}

int grid_divisions(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1.0) {
    throw InvalidInput("grid_step must lie in (0, 1]");
  }
  const double divisions = std::round(1.0 / grid_step);
  if (std::abs(divisions * grid_step - 1.0) > 1e-12) {
    throw InvalidInput("grid_step must divide 1 evenly");
  }
  return static_cast<int>(divisions);
}

PrescriptionSpace::PrescriptionSpace(SpaceVariant variant, double grid_step, double alpha,
                                     double beta)
    : variant_(variant), alpha_(alpha), beta_(beta) {
  const int divisions = grid_divisions(grid_step);
  grid_.reserve(divisions + 1);
  // k / divisions rather than k * step so that grid points are the nearest
  // doubles to the exact fractions (3 * 0.05 != 0.15).
  for (int k = 0; k <= divisions; ++k) {
    grid_.push_back(static_cast<double>(k) / divisions);
  }
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) {
    throw InvalidInput("alpha and beta must be probabilities");
  }
}

std::vector<Prescription> PrescriptionSpace::enumerate() const {
  std::vector<Prescription> out;
  if (variant_ == SpaceVariant::kConstrained) {
    out.reserve(grid_.size());
    for (double de : grid_) out.push_back({de, alpha_, beta_});
    return out;
  }
  out.reserve(grid_.size() * grid_.size() * grid_.size());
  for (double de : grid_) {
    for (double ag : grid_) {
      for (double pa : grid_) out.push_back({de, ag, pa});
    }
  }
  return out;
}

PrescriptionBatch to_batch(const std::vector<Prescription>& prescriptions) {
  PrescriptionBatch batch;
  batch.de.reserve(prescriptions.size());
  batch.ag.reserve(prescriptions.size());
  batch.pa.reserve(prescriptions.size());
  for (const auto& p : prescriptions) {
    batch.de.push_back(p.de);
    batch.ag.push_back(p.ag);
    batch.pa.push_back(p.pa);
    batch.idle_de.push_back(1.0 - p.de);
    batch.idle_ag.push_back(1.0 - p.ag);
    batch.idle_pa.push_back(1.0 - p.pa);
  }
  return batch;
}

}  // namespace cimac

#include <cmath>

#include "cimac/kernels.hpp"
#include "cimac/model.hpp"

namespace cimac::kernels::scalar {

void joint_action_probs(const SupportView& view, const PrescriptionBatch& batch,
                        std::span<double> joint, std::span<double> probs,
                        std::span<double> cost) {
  const int n = view.agents;
  const std::size_t K = batch.size();
  const std::size_t actions = num_joint_actions(n);
  const std::size_t d = view.weights.size();
  for (std::size_t u = 0; u < actions; ++u) {
    for (std::size_t s = 0; s < d; ++s) {
      double* row = joint.data() + (u * d + s) * K;
      for (std::size_t k = 0; k < K; ++k) {
        double value = 1.0;
        for (int agent = n - 1; agent >= 0; --agent) {
          const auto mode = static_cast<Mode>(view.modes[s * n + agent]);
          value *= batch.column(mode, (u >> (n - 1 - agent)) & 1U)[k];
        }
        row[k] = view.weights[s] * value;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      double total = 0.0;
      for (std::size_t s = 0; s < d; ++s) total += joint[(u * d + s) * K + k];
      probs[u * K + k] = total;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    double c = 0.0;
    for (std::size_t u = 0; u < actions; ++u) {
      const int transmitters = __builtin_popcountll(u);
      c += static_cast<double>(stage_cost_for(transmitters)) * probs[u * K + k];
    }
    cost[k] = c;
  }
}

void successor_rows(std::size_t support, std::span<const double> joint_u,
                    std::span<const double> u_probs, double scale, std::span<double> succ,
                    std::span<double> keys) {
  const std::size_t K = u_probs.size();
  for (std::size_t s = 0; s < support; ++s) {
    for (std::size_t k = 0; k < K; ++k) {
      const double total = u_probs[k];
      if (total == 0.0) {
        succ[s * K + k] = 0.0;
        keys[s * K + k] = 0.0;
        continue;
      }
      const double q = joint_u[s * K + k] / total;
      succ[s * K + k] = q;
      keys[s * K + k] = std::nearbyint(q * scale);
    }
  }
}

}  // namespace cimac::kernels::scalar

#pragma once

// Batch arithmetic over many prescriptions at once. Every kernel has a
// scalar reference and an AVX2 variant that performs the same IEEE operations
// in the same order, so both produce bit-identical results; the active
// variant is chosen at runtime from CPU support (override with CIMAC_SIMD).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "cimac/prescription.hpp"

namespace cimac::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

// Best available variant unless CIMAC_SIMD=scalar|avx2 says otherwise.
Isa active_isa();

// 10^digits, exact for digits <= 15.
double decimal_scale(int digits);

// A belief restricted to its support.
struct SupportView {
  int agents = 0;
  // Prior mass of each support profile, in ascending profile order.
  std::span<const double> weights;
  // Row-major (profile, agent) table of mode indices, weights.size() x agents.
  std::span<const std::uint8_t> modes;
};

// Likelihood of u for profile s under prescription k is
//   ((1 * a[n-1]) * a[n-2]) ... * a[0],  a[i] = u_i ? p_k(mode_i) : 1 - p_k(mode_i)
// and the joint weight is weights[s] * likelihood. Belief updates use the same
// product order, so successors built here match update() exactly.

// With d = support size and K = batch size:
//   joint[(u * d + s) * K + k] = joint weight of profile s, action u, prescription k
//   probs[u * K + k] = sum over s (ascending) of the joint weights
//   cost[k] = sum over u (ascending) of stage_cost(u) * probs[u * K + k]
using JointActionProbsFn = void (*)(const SupportView& view, const PrescriptionBatch& batch,
                                    std::span<double> joint, std::span<double> probs,
                                    std::span<double> cost);

// For one action u, given its joint weights joint_u[s * K + k] and
// probabilities u_probs[k]:
//   succ[s * K + k] = joint_u[s * K + k] / u_probs[k]
//   keys[s * K + k] = nearbyint(succ * scale)
// Both are 0 where u_probs[k] == 0.
using SuccessorRowsFn = void (*)(std::size_t support, std::span<const double> joint_u,
                                 std::span<const double> u_probs, double scale,
                                 std::span<double> succ, std::span<double> keys);

struct KernelTable {
  Isa isa;
  JointActionProbsFn joint_action_probs;
  SuccessorRowsFn successor_rows;
};

const KernelTable& kernels_for(Isa isa);
const KernelTable& active();

namespace scalar {
void joint_action_probs(const SupportView& view, const PrescriptionBatch& batch,
                        std::span<double> joint, std::span<double> probs, std::span<double> cost);
void successor_rows(std::size_t support, std::span<const double> joint_u,
                    std::span<const double> u_probs, double scale, std::span<double> succ,
                    std::span<double> keys);
}  // namespace scalar

#if defined(CIMAC_HAVE_AVX2_KERNELS)
namespace avx2 {
void joint_action_probs(const SupportView& view, const PrescriptionBatch& batch,
                        std::span<double> joint, std::span<double> probs, std::span<double> cost);
void successor_rows(std::size_t support, std::span<const double> joint_u,
                    std::span<const double> u_probs, double scale, std::span<double> succ,
                    std::span<double> keys);
}  // namespace avx2
#endif

}  // namespace cimac::kernels

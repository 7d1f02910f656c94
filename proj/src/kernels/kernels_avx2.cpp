// Compiled with -mavx2 only (no FMA) so every lane performs the scalar
// reference's operations in the same order.

#include <immintrin.h>

#include <cmath>

#include "cimac/kernels.hpp"
#include "cimac/model.hpp"

namespace cimac::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;
constexpr int kMaxAgents = 8;

}  // namespace

void joint_action_probs(const SupportView& view, const PrescriptionBatch& batch,
                        std::span<double> joint, std::span<double> probs,
                        std::span<double> cost) {
  const int n = view.agents;
  const std::size_t K = batch.size();
  const std::size_t actions = num_joint_actions(n);
  const std::size_t d = view.weights.size();
  const std::size_t vector_end = K - K % kLanes;
  // Multiplying by the leading 1.0 is exact, so the product starts from the
  // last agent's factor.
  const double* column[kMaxAgents];
  for (std::size_t u = 0; u < actions; ++u) {
    for (std::size_t s = 0; s < d; ++s) {
      for (int agent = 0; agent < n; ++agent) {
        const auto mode = static_cast<Mode>(view.modes[s * n + agent]);
        column[agent] = batch.column(mode, (u >> (n - 1 - agent)) & 1U);
      }
      double* row = joint.data() + (u * d + s) * K;
      const __m256d w = _mm256_set1_pd(view.weights[s]);
      std::size_t k = 0;
      if (n == 2) {
        for (; k < vector_end; k += kLanes) {
          const __m256d value =
              _mm256_mul_pd(_mm256_loadu_pd(column[1] + k), _mm256_loadu_pd(column[0] + k));
          _mm256_storeu_pd(row + k, _mm256_mul_pd(w, value));
        }
      } else {
        for (; k < vector_end; k += kLanes) {
          __m256d value = _mm256_loadu_pd(column[n - 1] + k);
          for (int agent = n - 2; agent >= 0; --agent) {
            value = _mm256_mul_pd(value, _mm256_loadu_pd(column[agent] + k));
          }
          _mm256_storeu_pd(row + k, _mm256_mul_pd(w, value));
        }
      }
      for (; k < K; ++k) {
        double value = column[n - 1][k];
        for (int agent = n - 2; agent >= 0; --agent) value *= column[agent][k];
        row[k] = view.weights[s] * value;
      }
    }
    double* out = probs.data() + u * K;
    std::size_t k = 0;
    for (; k < vector_end; k += kLanes) {
      __m256d total = _mm256_setzero_pd();
      for (std::size_t s = 0; s < d; ++s) {
        total = _mm256_add_pd(total, _mm256_loadu_pd(joint.data() + (u * d + s) * K + k));
      }
      _mm256_storeu_pd(out + k, total);
    }
    for (; k < K; ++k) {
      double total = 0.0;
      for (std::size_t s = 0; s < d; ++s) total += joint[(u * d + s) * K + k];
      out[k] = total;
    }
  }

  std::size_t k = 0;
  for (; k < vector_end; k += kLanes) {
    __m256d c = _mm256_setzero_pd();
    for (std::size_t u = 0; u < actions; ++u) {
      const __m256d weight =
          _mm256_set1_pd(static_cast<double>(stage_cost_for(__builtin_popcountll(u))));
      c = _mm256_add_pd(c, _mm256_mul_pd(weight, _mm256_loadu_pd(probs.data() + u * K + k)));
    }
    _mm256_storeu_pd(cost.data() + k, c);
  }
  for (; k < K; ++k) {
    double c = 0.0;
    for (std::size_t u = 0; u < actions; ++u) {
      c += static_cast<double>(stage_cost_for(__builtin_popcountll(u))) * probs[u * K + k];
    }
    cost[k] = c;
  }
}

void successor_rows(std::size_t support, std::span<const double> joint_u,
                    std::span<const double> u_probs, double scale, std::span<double> succ,
                    std::span<double> keys) {
  const std::size_t K = u_probs.size();
  const std::size_t vector_end = K - K % kLanes;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vscale = _mm256_set1_pd(scale);
  for (std::size_t s = 0; s < support; ++s) {
    const double* joint_row = joint_u.data() + s * K;
    double* succ_row = succ.data() + s * K;
    double* key_row = keys.data() + s * K;
    std::size_t k = 0;
    for (; k < vector_end; k += kLanes) {
      const __m256d total = _mm256_loadu_pd(u_probs.data() + k);
      const __m256d live = _mm256_cmp_pd(total, zero, _CMP_NEQ_OQ);
      __m256d q = _mm256_div_pd(_mm256_loadu_pd(joint_row + k), total);
      q = _mm256_and_pd(q, live);
      const __m256d key =
          _mm256_round_pd(_mm256_mul_pd(q, vscale), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
      _mm256_storeu_pd(succ_row + k, q);
      _mm256_storeu_pd(key_row + k, key);
    }
    for (; k < K; ++k) {
      const double total = u_probs[k];
      if (total == 0.0) {
        succ_row[k] = 0.0;
        key_row[k] = 0.0;
        continue;
      }
      const double q = joint_row[k] / total;
      succ_row[k] = q;
      key_row[k] = std::nearbyint(q * scale);
    }
  }
}

}  // namespace cimac::kernels::avx2

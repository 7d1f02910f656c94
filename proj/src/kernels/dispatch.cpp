#include <cstdlib>
#include <string>

#include "cimac/errors.hpp"
#include "cimac/kernels.hpp"

namespace cimac::kernels {

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(CIMAC_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, &scalar::joint_action_probs,
                                   &scalar::successor_rows};
#if defined(CIMAC_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &avx2::joint_action_probs, &avx2::successor_rows};
#endif

Isa select_isa() {
  if (const char* forced = std::getenv("CIMAC_SIMD")) {
    const std::string value(forced);
    if (value == "scalar") return Isa::kScalar;
    if (value == "avx2" && isa_available(Isa::kAvx2)) return Isa::kAvx2;
  }
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

double decimal_scale(int digits) {
  static constexpr double kPowers[] = {1e0, 1e1, 1e2,  1e3,  1e4,  1e5,  1e6,  1e7,
                                       1e8, 1e9, 1e10, 1e11, 1e12, 1e13, 1e14, 1e15};
  if (digits < 0 || digits > 15) throw InvalidInput("decimal digits must lie in [0, 15]");
  return kPowers[digits];
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw Unsupported("kernel variant " + std::string(isa_name(isa)) +
                      " is not available on this CPU");
  }
#if defined(CIMAC_HAVE_AVX2_KERNELS)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() { return kernels_for(active_isa()); }

}  // namespace cimac::kernels

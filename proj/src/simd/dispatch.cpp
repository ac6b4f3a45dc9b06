#include <cstdlib>

#include "deadeye/core/error.hpp"
#include "deadeye/simd/kernels.hpp"

namespace deadeye::simd {

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::optional<Isa> isa_from_string(const std::string& text) {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(DEADEYE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("DEADEYE_ISA")) {
      if (auto requested = isa_from_string(env); requested && isa_supported(*requested)) return *requested;
    }
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

const KernelTable& kernels(Isa isa) {
  static const KernelTable scalar_table{Isa::scalar, &scalar::raster_span, &scalar::ray_march};
#if defined(DEADEYE_HAVE_AVX2)
  static const KernelTable avx2_table{Isa::avx2, &avx2::raster_span, &avx2::ray_march};
#endif
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::configuration, std::string("instruction set not supported: ") + to_string(isa));
  }
#if defined(DEADEYE_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2_table;
#endif
  return scalar_table;
}

}  // namespace deadeye::simd

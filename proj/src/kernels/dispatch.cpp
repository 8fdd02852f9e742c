#include <cstdlib>
#include <stdexcept>

#include "couette/kernels.hpp"

namespace couette::kernels {

KernelTable scalar_table();
#ifdef COUETTE_WITH_AVX2
KernelTable avx2_table();
#endif
#ifdef COUETTE_WITH_AVX512
KernelTable avx512_table();
#endif

NormSums& NormSums::operator+=(const NormSums& o) {
  pvx += o.pvx;
  pvy += o.pvy;
  qv += o.qv;
  rho += o.rho;
  theta += o.theta;
  sigma += o.sigma;
  rho_sum += o.rho_sum;
  theta_sum += o.theta_sum;
  return *this;
}

NormSums& NormSums::operator*=(double s) {
  pvx *= s;
  pvy *= s;
  qv *= s;
  rho *= s;
  theta *= s;
  sigma *= s;
  rho_sum *= s;
  theta_sum *= s;
  return *this;
}

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
  }
  return "?";
}

Isa isa_from_string(const std::string& s) {
  if (s == "scalar") return Isa::scalar;
  if (s == "avx2") return Isa::avx2;
  if (s == "avx512") return Isa::avx512;
  throw std::invalid_argument("unknown SIMD variant '" + s + "'");
}

bool compiled(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
#ifdef COUETTE_WITH_AVX2
    case Isa::avx2: return true;
#endif
#ifdef COUETTE_WITH_AVX512
    case Isa::avx512: return true;
#endif
    default: return false;
  }
}

bool supported(Isa isa) {
  if (!compiled(isa)) return false;
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    case Isa::avx512:
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }
  return false;
#else
  return isa == Isa::scalar;
#endif
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::runtime_error(std::string("SIMD variant not available: ") + to_string(isa));
  static const KernelTable scalar = scalar_table();
  switch (isa) {
    case Isa::scalar: return scalar;
#ifdef COUETTE_WITH_AVX2
    case Isa::avx2: {
      static const KernelTable t = avx2_table();
      return t;
    }
#endif
#ifdef COUETTE_WITH_AVX512
    case Isa::avx512: {
      static const KernelTable t = avx512_table();
      return t;
    }
#endif
    default: break;
  }
  return scalar;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::avx512}) {
    if (supported(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    if (const char* env = std::getenv("COUETTE_SIMD"); env != nullptr && *env != '\0') {
      return table(isa_from_string(env));
    }
    return table(supported_isas().back());
  }();
  return chosen;
}

}  // namespace couette::kernels

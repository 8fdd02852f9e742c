#include <immintrin.h>

#include <cstddef>

namespace couette::kernels {
namespace {

struct VAvx512 {
  static constexpr std::size_t width = 8;
  __m512d v;

  VAvx512() = default;
  explicit VAvx512(double x) : v(_mm512_set1_pd(x)) {}
  VAvx512(__m512d x) : v(x) {}
  static VAvx512 load(const double* p) { return _mm512_loadu_pd(p); }
  void store(double* p) const { _mm512_storeu_pd(p, v); }
  double reduce_max() const { return _mm512_reduce_max_pd(v); }
  double reduce_add() const { return _mm512_reduce_add_pd(v); }
};

inline VAvx512 operator+(VAvx512 a, VAvx512 b) { return _mm512_add_pd(a.v, b.v); }
inline VAvx512 operator-(VAvx512 a, VAvx512 b) { return _mm512_sub_pd(a.v, b.v); }
inline VAvx512 operator*(VAvx512 a, VAvx512 b) { return _mm512_mul_pd(a.v, b.v); }
inline VAvx512 operator/(VAvx512 a, VAvx512 b) { return _mm512_div_pd(a.v, b.v); }
inline VAvx512 sqrt(VAvx512 a) { return _mm512_sqrt_pd(a.v); }
inline VAvx512 abs(VAvx512 a) { return _mm512_abs_pd(a.v); }
inline VAvx512 max(VAvx512 a, VAvx512 b) { return _mm512_max_pd(a.v, b.v); }

}  // namespace
}  // namespace couette::kernels

#include "kernels_impl.hpp"

namespace couette::kernels {

KernelTable avx512_table() { return make_table<VAvx512>(Isa::avx512); }

}  // namespace couette::kernels

#include <immintrin.h>

#include <cstddef>

namespace couette::kernels {
namespace {

struct VAvx2 {
  static constexpr std::size_t width = 4;
  __m256d v;

  VAvx2() = default;
  explicit VAvx2(double x) : v(_mm256_set1_pd(x)) {}
  VAvx2(__m256d x) : v(x) {}
  static VAvx2 load(const double* p) { return _mm256_loadu_pd(p); }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  double reduce_max() const {
    __m128d m = _mm_max_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
  }
  double reduce_add() const {
    __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
    s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
    return _mm_cvtsd_f64(s);
  }
};

inline VAvx2 operator+(VAvx2 a, VAvx2 b) { return _mm256_add_pd(a.v, b.v); }
inline VAvx2 operator-(VAvx2 a, VAvx2 b) { return _mm256_sub_pd(a.v, b.v); }
inline VAvx2 operator*(VAvx2 a, VAvx2 b) { return _mm256_mul_pd(a.v, b.v); }
inline VAvx2 operator/(VAvx2 a, VAvx2 b) { return _mm256_div_pd(a.v, b.v); }
inline VAvx2 sqrt(VAvx2 a) { return _mm256_sqrt_pd(a.v); }
inline VAvx2 abs(VAvx2 a) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), a.v); }
inline VAvx2 max(VAvx2 a, VAvx2 b) { return _mm256_max_pd(a.v, b.v); }

}  // namespace
}  // namespace couette::kernels

#include "kernels_impl.hpp"

namespace couette::kernels {

KernelTable avx2_table() { return make_table<VAvx2>(Isa::avx2); }

}  // namespace couette::kernels

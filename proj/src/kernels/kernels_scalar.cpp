#include <cmath>

namespace couette::kernels {
namespace {

// One lane; the reference every vector variant is tested against.
struct VScalar {
  static constexpr std::size_t width = 1;
  double v;

  VScalar() = default;
  explicit VScalar(double x) : v(x) {}
  static VScalar load(const double* p) { return VScalar(*p); }
  void store(double* p) const { *p = v; }
  double reduce_max() const { return v; }
  double reduce_add() const { return v; }
};

inline VScalar operator+(VScalar a, VScalar b) { return VScalar(a.v + b.v); }
inline VScalar operator-(VScalar a, VScalar b) { return VScalar(a.v - b.v); }
inline VScalar operator*(VScalar a, VScalar b) { return VScalar(a.v * b.v); }
inline VScalar operator/(VScalar a, VScalar b) { return VScalar(a.v / b.v); }
inline VScalar sqrt(VScalar a) { return VScalar(__builtin_sqrt(a.v)); }
inline VScalar abs(VScalar a) { return VScalar(__builtin_fabs(a.v)); }
inline VScalar max(VScalar a, VScalar b) { return VScalar(a.v > b.v ? a.v : b.v); }

}  // namespace
}  // namespace couette::kernels

#include "kernels_impl.hpp"

namespace couette::kernels {

KernelTable scalar_table() { return make_table<VScalar>(Isa::scalar); }

}  // namespace couette::kernels

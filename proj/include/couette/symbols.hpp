#pragma once

// Time-dependent Fourier symbols of the sheared frame, the weighted 2x2
// system matrices and the Lyapunov functional.

#include <array>
#include <cmath>
#include <string>

#include "couette/spectral_core.hpp"

namespace couette {

// Bottom-left entry of L(t). `derived` substitutes the weights into the
// transformed equations of motion (√p/M + 2Mk²/p^{3/2}); `printed` is the
// literal matrix with 2√p/M, kept for A/B comparisons.
enum class Convention { derived, printed };

const char* to_string(Convention c);
Convention convention_from_string(const std::string& s);

// p = k² + (η - kt)², the symbol of -Δ_L.
double symbol_p(double t, const ModeKey& key);
// ∂_t p = -2k(η - kt).
double symbol_dtp(double t, const ModeKey& key);

struct Mat2 {
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
};

Mat2 matrix_L(double t, const ModeKey& key, const PhysParams& params, Convention conv = Convention::derived);
// F(t) = (0, -2k²/(γ p^{7/4})).
std::array<double, 2> forcing_F(double t, const ModeKey& key, const PhysParams& params);

struct UnweightedState {
  cplx delta;
  cplx a;
};

// Z1 = δ̂ / (M p^{1/4}), Z2 = Â / p^{3/4}.
struct WeightedState {
  cplx z1;
  cplx z2;

  double norm() const { return std::sqrt(std::norm(z1) + std::norm(z2)); }
};

WeightedState weight(const UnweightedState& s, double t, const ModeKey& key, const PhysParams& params);
UnweightedState unweight(const WeightedState& z, double t, const ModeKey& key, const PhysParams& params);

struct LyapCoeffs {
  double a = 0.0;  // dtp / (4p)
  double b = 1.0;  // √p / M
  double d = 1.0;  // bottom-left entry of L
};

LyapCoeffs lyap_coeffs(double t, const ModeKey& key, const PhysParams& params, Convention conv = Convention::derived);

// E = √(d/b)|Z1|² + √(b/d)|Z2|² + 2 a/√(db) Re(Z1 conj Z2)
double lyap_energy(const WeightedState& z, const LyapCoeffs& c);
// The diagonal part √(d/b)|Z1|² + √(b/d)|Z2|².
double lyap_diagonal(const WeightedState& z, const LyapCoeffs& c);

// 8a² ≤ bd gives m·diag ≤ E ≤ (2-m)·diag with m = 1 - 1/√8.
inline const double kLyapMargin = 1.0 - 1.0 / std::sqrt(8.0);

// Constant C in ‖p^{∓β} f‖_{H^s} ≤ C ⟨t⟩^{∓2β} ‖f‖_{H^{s+2β}} for |k| ≥ 1.
// Both directions follow from ⟨t⟩² ≤ 2 p ⟨k,η⟩² and p ≤ 2⟨t⟩²⟨k,η⟩².
inline double weight_inequality_constant(double beta) { return std::pow(2.0, beta); }

}  // namespace couette

#pragma once

// Data-parallel inner loops over η lanes of one wavenumber: RK4 steps of the
// full and weighted per-mode systems and the quadrature sums behind every
// norm. Each kernel exists as a scalar reference and as AVX2/AVX-512
// variants picked at runtime.
//
// All coefficients of both systems are real, so the real and imaginary parts
// of a mode evolve independently; they are stored as separate lanes.

#include <cstddef>
#include <string>
#include <vector>

namespace couette::kernels {

enum class Isa { scalar, avx2, avx512 };

const char* to_string(Isa isa);
Isa isa_from_string(const std::string& s);

// Lane counts handed to kernels must be a multiple of this.
inline constexpr std::size_t kLanePad = 8;

inline std::size_t padded(std::size_t n) { return (n + kLanePad - 1) / kLanePad * kLanePad; }

struct FullStepArgs {
  double k = 1.0;
  double gamma = 1.4;
  double mach = 1.0;
  std::size_t n = 0;
  const double* eta = nullptr;
  const double* in[4] = {};  // R, A, Ω, Θ planes
  double* out[4] = {};
};

struct WeightedStepArgs {
  double k = 1.0;
  double gamma = 1.4;
  double mach = 1.0;
  double acoustic = 1.0;  // 1 for the derived convention, 2 for the printed one
  std::size_t n = 0;
  const double* eta = nullptr;
  const double* source = nullptr;  // β̂ⁱⁿ + Γ̂ⁱⁿ plane
  const double* in[2] = {};        // Z1, Z2 planes
  double* out[2] = {};
};

// err = max |y_two_halves - y_one_step|, scale = max(|y_in|, |y_out|).
struct StepStats {
  double err = 0.0;
  double scale = 0.0;
};

struct NormArgs {
  double k = 1.0;
  double gamma = 1.4;
  double t = 0.0;
  std::size_t n = 0;
  const double* eta = nullptr;
  const double* weight = nullptr;  // quadrature weight per lane
  const double* in[4] = {};        // R, A, Ω, Θ planes
};

// Weighted sums Σ w |·|² over lanes (moving frame, q = η - kt, p = k² + q²).
struct NormSums {
  double pvx = 0.0;        // q²/p² |Ω̂|²
  double pvy = 0.0;        // k²/p² |Ω̂|²
  double qv = 0.0;         // |Â|²/p
  double rho = 0.0;        // |R̂|²
  double theta = 0.0;      // |Θ̂|²
  double sigma = 0.0;      // |(γ-1)R̂ - Θ̂|²
  double rho_sum = 0.0;    // |σ̂ + (R̂+Θ̂)|²  (= γ²|R̂|²)
  double theta_sum = 0.0;  // |(γ-1)(R̂+Θ̂) - σ̂|²  (= γ²|Θ̂|²)

  NormSums& operator+=(const NormSums& o);
  NormSums& operator*=(double s);
};

struct KernelTable {
  Isa isa = Isa::scalar;
  std::size_t width = 1;
  // doubling = false: out = one RK4 step of size h, err = 0.
  // doubling = true: out = two RK4 steps of size h/2, err against one step of size h.
  StepStats (*full_step)(const FullStepArgs&, double t, double h, bool doubling) = nullptr;
  StepStats (*weighted_step)(const WeightedStepArgs&, double t, double h, bool doubling) = nullptr;
  NormSums (*norm_sums)(const NormArgs&) = nullptr;
};

bool compiled(Isa isa);
bool supported(Isa isa);  // compiled and the CPU has the instructions
const KernelTable& table(Isa isa);
std::vector<Isa> supported_isas();
// Widest supported ISA, or the one named by COUETTE_SIMD (scalar|avx2|avx512).
const KernelTable& active();

}  // namespace couette::kernels

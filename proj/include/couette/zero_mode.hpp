#pragma once

// The x-averaged (k = 0) dynamics: a method-of-lines solver of the zero-mode
// system, d'Alembert references for its wave equations, and recovery of ω₀,
// θ₀ from ρ₀.

#include <functional>
#include <vector>

#include "couette/spectral_core.hpp"

namespace couette {

// Profiles on the uniform grid y_i = -L + i h, i = 0..n-1, h = 2L/(n-1).
struct ZeroModeState {
  double half_width = 10.0;
  std::vector<double> rho;
  std::vector<double> alpha;
  std::vector<double> omega;
  std::vector<double> theta;

  std::size_t size() const { return rho.size(); }
  double spacing() const { return 2.0 * half_width / static_cast<double>(size() - 1); }
  double y(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing(); }
  std::vector<double> sum_rho_theta() const;
};

using Profile = std::function<double(double)>;

ZeroModeState make_zero_mode_state(double half_width, std::size_t n, const Profile& rho, const Profile& alpha,
                                   const Profile& omega, const Profile& theta);

class ContaminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZeroModeOptions {
  // Largest admissible |profile| next to either boundary during the run.
  double boundary_tol = 1e-8;
  // Called after every step with the current time and state, if set.
  std::function<void(double, const ZeroModeState&)> observer;
};

// ∂_t ρ₀ = -α₀, ∂_t α₀ = -(1/(γM²)) ∂_yy(ρ₀+θ₀), ∂_t ω₀ = α₀, ∂_t θ₀ = -(γ-1) α₀,
// centered second differences, Dirichlet ends, classical RK4. The final step
// is shortened to land on t_end. Throws std::invalid_argument when
// dt > 0.5 M h and ContaminationError when a boundary value exceeds the tolerance.
ZeroModeState evolve_zero_mode(const ZeroModeState& s0, const PhysParams& params, double t_end, double dt,
                               const ZeroModeOptions& opts = {});

// d'Alembert solution of s_tt = c² s_yy from s(0) = u, s_t(0) = g on the grid
// of the samples, evaluated at arbitrary points by cubic interpolation.
// Data are taken as zero outside [-L, L]. Throws std::out_of_range when an
// evaluation point lies outside [-L, L].
std::vector<double> dalembert(const std::vector<double>& u, const std::vector<double>& g, double half_width,
                              double c, double t, const std::vector<double>& y);

// (ρ₀+θ₀)(t, y_i) on the state's own grid: u = (ρ₀+θ₀)ⁱⁿ, g = -γ α₀ⁱⁿ, c = 1/M.
std::vector<double> dalembert_reference(const ZeroModeState& s0, const PhysParams& params, double t);

struct RecoveredZeroFields {
  std::vector<double> omega;
  std::vector<double> theta;
};

// ω₀(t) = ω₀ⁱⁿ + ρ₀ⁱⁿ - ρ₀(t),  θ₀(t) = θ₀ⁱⁿ + (γ-1)(ρ₀(t) - ρ₀ⁱⁿ).
RecoveredZeroFields recover_zero_fields(const std::vector<double>& rho_t, const ZeroModeState& initial,
                                        const PhysParams& params);

// Discrete energy Σ h [ (γ α₀)² + c² ((s_{i+1}-s_i)/h)² ], s = ρ₀+θ₀, c = 1/M.
double zero_mode_wave_energy(const ZeroModeState& s, const PhysParams& params);

}  // namespace couette

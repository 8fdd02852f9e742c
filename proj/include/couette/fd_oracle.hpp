#pragma once

// Finite-difference solver of the closed (ρ, α, ω, θ) system in the original
// coordinates at one x-wavenumber. Works on y-profiles only and never touches
// the sheared frame, so it serves as an independent check of the spectral path.

#include <span>
#include <vector>

#include "couette/spectral_core.hpp"

namespace couette {

struct FdState {
  int k = 1;
  YGrid grid;
  double t = 0.0;
  std::vector<cplx> rho;
  std::vector<cplx> alpha;
  std::vector<cplx> omega;
  std::vector<cplx> theta;
};

// x-coefficients of the packets at wavenumber k, sampled on the grid at t = 0.
FdState make_fd_state(const InitialDataSpec& spec, int k, const YGrid& grid);

// Solves (∂_yy - k²) ψ = rhs, ψ(±L) = 0, with centered differences (Thomas algorithm).
std::vector<cplx> helmholtz_solve_fd(std::span<const cplx> rhs, int k, const YGrid& grid);

struct FdLimits {
  double boundary_tol = 1e-10;  // relative to the largest profile value
  double phase_tol = 0.05;      // |k| L dt
};

// One RK4 step of
//   ∂_t ρ = -iky ρ - α
//   ∂_t α = -iky α - 2ik(∂_y ψ_α + ik ψ_ω) - (1/(γM²))(∂_yy - k²)(ρ+θ)
//   ∂_t ω = -iky ω + α
//   ∂_t θ = -iky θ - (γ-1) α
// with ψ_f = (∂_yy - k²)^{-1} f. Throws std::invalid_argument when dt breaks the
// acoustic CFL (dt ≤ 0.5 M h) or the shear phase bound, std::runtime_error on
// boundary contamination.
FdState step_fd(const FdState& s, const PhysParams& params, double dt, const FdLimits& limits = {});

// Repeated step_fd up to t_end (last step shortened).
FdState evolve_fd(const FdState& s, const PhysParams& params, double t_end, double dt, const FdLimits& limits = {});

// Largest dt admitted by both step bounds for this grid and k.
double fd_max_dt(const FdState& s, const PhysParams& params, const FdLimits& limits = {});

// (2π ∫ |f|² dy)^{1/2}, the contribution of one k to the physical L² norm.
double fd_l2(std::span<const cplx> f, const YGrid& grid);

struct FdDiscrepancy {
  double rho = 0.0;
  double alpha = 0.0;
  double omega = 0.0;
  double theta = 0.0;
  double max() const;
};

// Relative L² mismatch per field between the FD profiles and the spectral
// moving-frame fields (R̂, Â, Ω̂, Θ̂) transformed back at the FD time, using
// ρ(t,x,y) = R(t, x - ty, y). Throws std::invalid_argument when the η grid's
// implied y-period does not cover the FD domain.
FdDiscrepancy compare_with_spectral(const FdState& fd, const SpectralField& R, const SpectralField& A,
                                    const SpectralField& Omega, const SpectralField& Theta);

struct TransportDrift {
  double beta = 0.0;   // max_y ||(ρ+ω)(t,y)| - |(ρ+ω)(0,y)|| / max |ρ+ω|(0)
  double gamma = 0.0;  // same for θ + (γ-1) ω
};

TransportDrift transport_drift(const FdState& initial, const FdState& later, const PhysParams& params);

}  // namespace couette

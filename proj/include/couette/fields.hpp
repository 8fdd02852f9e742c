#pragma once

// Transported invariants, reconstruction of (R̂, Θ̂, Ω̂) from δ̂, the Helmholtz
// velocity spectra and the map from moving-frame to physical frequencies.

#include "couette/spectral_core.hpp"

namespace couette {

struct Invariants {
  SpectralField beta_in;   // ρ̂ⁱⁿ + ω̂ⁱⁿ
  SpectralField gamma_in;  // θ̂ⁱⁿ + (γ-1) ω̂ⁱⁿ
  SpectralField sigma_in;  // (γ-1) ρ̂ⁱⁿ - θ̂ⁱⁿ
};

Invariants invariants_from_initial(const SpectralField& rho_in, const SpectralField& alpha_in,
                                   const SpectralField& omega_in, const SpectralField& theta_in,
                                   const PhysParams& params);
Invariants invariants_from_initial(const InitialFields& in, const PhysParams& params);

// δ̂ = (R̂ + Θ̂)/γ
struct DeltaField {
  SpectralField delta;
};

DeltaField delta_from(const SpectralField& R, const SpectralField& Theta, const PhysParams& params);

struct ReconstructedFields {
  SpectralField R;
  SpectralField Theta;
  SpectralField Omega;
};

// Ω̂ = (β̂ⁱⁿ+Γ̂ⁱⁿ)/γ - δ̂,  R̂ = β̂ⁱⁿ - Ω̂,  Θ̂ = Γ̂ⁱⁿ - (γ-1) Ω̂.
ReconstructedFields reconstruct_fields(const DeltaField& delta, const Invariants& inv, const PhysParams& params);

struct VelocitySpectra {
  SpectralField pvx;
  SpectralField pvy;
  SpectralField qvx;
  SpectralField qvy;
};

// With q = η - kt, p = k² + q²:
//   P[v] = (i q Ω̂, -i k Ω̂)/p,  Q[v] = (-i k Â, -i q Â)/p.
VelocitySpectra helmholtz_spectra(const SpectralField& Omega, const SpectralField& A, double t);

// Physical-frame view of a moving-frame spectrum at time t: the value at
// (k, ξ) is the stored value at (k, ξ + kt).
class ShearedSpectrum {
 public:
  ShearedSpectrum(SpectralField f, double t);

  double time() const { return t_; }
  const SpectralField& moving() const { return f_; }
  // Physical frequency of stored node j of row ki.
  double xi(std::size_t ki, std::size_t j) const;
  // Cubic interpolation in η; throws std::out_of_range outside the stored range.
  cplx value_at(int k, double xi) const;
  // Resamples onto a uniform ξ grid, giving an ordinary SpectralField.
  SpectralField resample(const EtaGrid& xi_grid) const;
  // (Σ_k ∫ |f̂|² dξ)^{1/2}, equal to the moving-frame value (pure relabeling).
  double l2_norm() const;

 private:
  SpectralField f_;
  double t_;
};

ShearedSpectrum to_physical_frequency(const SpectralField& f, double t);

}  // namespace couette

#include "couette/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace couette {

namespace {

void require_same(const SpectralField& a, const SpectralField& b, const char* what) {
  if (!a.same_layout(b)) throw std::invalid_argument(std::string("grid mismatch: ") + what);
}

template <class Fn>
SpectralField combine(const SpectralField& a, const SpectralField& b, Fn fn) {
  SpectralField out(a.k_list(), a.grid());
  for (std::size_t ki = 0; ki < a.k_count(); ++ki) {
    for (std::size_t j = 0; j < a.grid().size(); ++j) out.at(ki, j) = fn(a.at(ki, j), b.at(ki, j));
  }
  return out;
}

}  // namespace

Invariants invariants_from_initial(const SpectralField& rho_in, const SpectralField& alpha_in,
                                   const SpectralField& omega_in, const SpectralField& theta_in,
                                   const PhysParams& params) {
  validate_params(params);
  require_same(rho_in, alpha_in, "alpha");
  require_same(rho_in, omega_in, "omega");
  require_same(rho_in, theta_in, "theta");
  const double gm1 = params.gamma - 1.0;
  return {combine(rho_in, omega_in, [](cplx r, cplx o) { return r + o; }),
          combine(theta_in, omega_in, [gm1](cplx th, cplx o) { return th + gm1 * o; }),
          combine(rho_in, theta_in, [gm1](cplx r, cplx th) { return gm1 * r - th; })};
}

Invariants invariants_from_initial(const InitialFields& in, const PhysParams& params) {
  return invariants_from_initial(in.rho, in.alpha, in.omega, in.theta, params);
}

DeltaField delta_from(const SpectralField& R, const SpectralField& Theta, const PhysParams& params) {
  require_same(R, Theta, "theta");
  const double g = params.gamma;
  return {combine(R, Theta, [g](cplx r, cplx th) { return (r + th) / g; })};
}

ReconstructedFields reconstruct_fields(const DeltaField& delta, const Invariants& inv, const PhysParams& params) {
  validate_params(params);
  require_same(delta.delta, inv.beta_in, "beta");
  require_same(delta.delta, inv.gamma_in, "gamma");
  const double g = params.gamma;
  SpectralField omega(delta.delta.k_list(), delta.delta.grid());
  SpectralField R = omega;
  SpectralField theta = omega;
  for (std::size_t ki = 0; ki < omega.k_count(); ++ki) {
    for (std::size_t j = 0; j < omega.grid().size(); ++j) {
      const cplx b = inv.beta_in.at(ki, j);
      const cplx G = inv.gamma_in.at(ki, j);
      const cplx o = (b + G) / g - delta.delta.at(ki, j);
      omega.at(ki, j) = o;
      R.at(ki, j) = b - o;
      theta.at(ki, j) = G - (g - 1.0) * o;
    }
  }
  return {std::move(R), std::move(theta), std::move(omega)};
}

VelocitySpectra helmholtz_spectra(const SpectralField& Omega, const SpectralField& A, double t) {
  require_same(Omega, A, "A");
  VelocitySpectra v{SpectralField(Omega.k_list(), Omega.grid()), SpectralField(Omega.k_list(), Omega.grid()),
                    SpectralField(Omega.k_list(), Omega.grid()), SpectralField(Omega.k_list(), Omega.grid())};
  const cplx I(0.0, 1.0);
  for (std::size_t ki = 0; ki < Omega.k_count(); ++ki) {
    const double k = Omega.k_list()[ki];
    for (std::size_t j = 0; j < Omega.grid().size(); ++j) {
      const double q = Omega.grid()[j] - k * t;
      const double p = k * k + q * q;
      const cplx o = Omega.at(ki, j) / p;
      const cplx a = A.at(ki, j) / p;
      v.pvx.at(ki, j) = I * q * o;
      v.pvy.at(ki, j) = -I * k * o;
      v.qvx.at(ki, j) = -I * k * a;
      v.qvy.at(ki, j) = -I * q * a;
    }
  }
  return v;
}

ShearedSpectrum::ShearedSpectrum(SpectralField f, double t) : f_(std::move(f)), t_(t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
}

double ShearedSpectrum::xi(std::size_t ki, std::size_t j) const {
  return f_.grid()[j] - static_cast<double>(f_.k_list()[ki]) * t_;
}

cplx ShearedSpectrum::value_at(int k, double xi) const {
  const EtaGrid& g = f_.grid();
  const std::size_t ki = f_.k_index(k);
  const double eta = xi + static_cast<double>(k) * t_;
  const double tol = 1e-12 * std::max(1.0, std::abs(eta));
  if (eta < g.eta_min() - tol || eta > g.eta_max() + tol) {
    throw std::out_of_range("physical frequency " + std::to_string(xi) + " outside the stored range for k=" +
                            std::to_string(k));
  }
  const std::size_t n = g.size();
  const double u = std::clamp((eta - g.eta_min()) / g.spacing(), 0.0, static_cast<double>(n - 1));
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= n - 1) i = n - 2;
  const double s = u - static_cast<double>(i);
  if (s == 0.0) return f_.at(ki, i);
  if (n < 4) return (1.0 - s) * f_.at(ki, i) + s * f_.at(ki, i + 1);
  // Four-point Lagrange stencil, shifted inward at the ends.
  std::size_t i0 = i == 0 ? 0 : i - 1;
  if (i0 + 3 >= n) i0 = n - 4;
  const double x = u - static_cast<double>(i0);
  cplx out = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double l = 1.0;
    for (std::size_t b = 0; b < 4; ++b) {
      if (a != b) l *= (x - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
    }
    out += l * f_.at(ki, i0 + a);
  }
  return out;
}

SpectralField ShearedSpectrum::resample(const EtaGrid& xi_grid) const {
  SpectralField out(f_.k_list(), xi_grid);
  for (std::size_t ki = 0; ki < f_.k_count(); ++ki) {
    for (std::size_t j = 0; j < xi_grid.size(); ++j) out.at(ki, j) = value_at(f_.k_list()[ki], xi_grid[j]);
  }
  return out;
}

double ShearedSpectrum::l2_norm() const { return aniso_norm(f_, 0.0, 0.0); }

ShearedSpectrum to_physical_frequency(const SpectralField& f, double t) { return ShearedSpectrum(f, t); }

}  // namespace couette

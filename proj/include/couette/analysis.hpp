#pragma once

// Rate fits, the data-dependent bounds of the main estimates, and the
// forcing-integral bound of the Duhamel representation.

#include <span>
#include <string>
#include <vector>

#include "couette/spectral_core.hpp"

namespace couette {

struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double residual = 0.0;  // RMS of log(value) about the fitted line
  std::size_t samples = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// Least squares of log(value) against log(t) over samples with t in [t_lo, t_hi].
// Throws std::invalid_argument with fewer than 10 samples or a nonpositive value in the window.
PowerFit fit_power_law(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi);

// One row of a norm time series: the left-hand sides of the three estimates
// plus diagnostics.
struct NormSample {
  double t = 0.0;
  double pvx = 0.0;            // ‖P[v]^x‖
  double pvy = 0.0;            // ‖P[v]^y‖
  double qv = 0.0;             // ‖Q[v]‖
  double rho_scaled = 0.0;     // (γ/M)‖ρ‖
  double theta_scaled = 0.0;   // (γ/M)‖θ‖
  double lyap_min = 1.0;       // min over modes of E(t)/E(0)
  double lyap_max = 1.0;
  double beta_drift = 0.0;     // max |β̂(t) - β̂(0)| / max initial amplitude
  double gamma_drift = 0.0;
  double sigma_drift = 0.0;
  double sigma_l2 = 0.0;       // (1/M)‖(γ-1)ρ - θ‖
  double rho_split_defect = 0.0;    // |‖x₁+y₁‖ - (γ/M)‖ρ‖| / max(…)
  double theta_split_defect = 0.0;  // |‖(γ-1)y₁ - x₁‖ - (γ/M)‖θ‖| / max(…)

  double compressible() const { return qv + rho_scaled + theta_scaled; }
};

struct NormSeries {
  std::vector<NormSample> samples;

  std::vector<double> times() const;
  std::vector<double> column(double NormSample::*field) const;
  std::vector<double> compressible() const;
};

// Initial-data norms appearing on the right of the three estimates, with
// S = ρⁱⁿ + θⁱⁿ + γωⁱⁿ.
struct DataNorms {
  // first estimate
  double e1_rt = 0.0;     // ‖(ρ+θ)/(γM)‖ in H^{-1/2}_x L²
  double e1_alpha = 0.0;  // ‖α‖ in H^{-1/2}_x H^{-1}_y
  double e1_s = 0.0;      // ‖S/γ‖ in H^{-1/2}_x H^{1/2}_y
  double e1_tail = 0.0;   // ‖S/γ‖ in H^{-1}_x H^1_y
  // second estimate
  double e2_rt = 0.0;     // H^{-1/2}_x H^1_y
  double e2_alpha = 0.0;  // H^{-1/2}_x L²
  double e2_s = 0.0;      // H^{-1/2}_x H^{3/2}_y
  double e2_tail = 0.0;   // H^{-1}_x H^2_y
  // third estimate
  double e3_sigma = 0.0;  // ‖((γ-1)ρ-θ)/M‖ in L²
  double e3_rt = 0.0;     // ‖(ρ+θ)/(γM)‖ in L²
  double e3_alpha = 0.0;  // ‖α‖ in H^{-1}
  double e3_s = 0.0;      // ‖S/γ‖ in H^{1/2}
};

DataNorms data_norms(const InitialFields& in, const PhysParams& params);

// Time weights multiply data norms; the ratio is LHS(t) / RHS(t).
double pvx_bound(double t, const DataNorms& d, const PhysParams& params);
double pvy_bound(double t, const DataNorms& d, const PhysParams& params);
double compressible_bound(double t, const DataNorms& d, const PhysParams& params);

struct BoundReport {
  double pvx = 0.0;           // sup_t ‖P[v]^x‖ / bound
  double pvy = 0.0;
  double compressible = 0.0;  // sup_t (‖Q[v]‖ + (γ/M)‖ρ‖ + (γ/M)‖θ‖) / bound
  double pvx_at = 0.0;        // time of each supremum
  double pvy_at = 0.0;
  double compressible_at = 0.0;
};

// Throws std::domain_error when a bound vanishes while its left side does not.
BoundReport theorem_bound_report(const NormSeries& series, const DataNorms& d, const PhysParams& params);

// ∫_R (1+u²)^{-7/4} du, by adaptive quadrature.
double forcing_reference_constant();
// Closed form √π Γ(5/4)/Γ(7/4) of the same integral.
double forcing_reference_closed_form();

// Samples of s for the forcing quadrature: Simpson on [0, s_max] with n
// (odd) nodes, plus the analytic tail beyond s_max.
struct SGrid {
  double s_max = 200.0;
  std::size_t n = 200001;
};

struct DuhamelBound {
  double value = 0.0;      // γ|k|^{3/2} ∫_0^∞ |F(s)| ds
  double tail = 0.0;       // contribution of (s_max, ∞)
  double bound = 0.0;      // reference constant
  double closed_form = 0.0;  // 2 ∫_{-η/k}^∞ (1+u²)^{-7/4} du
  bool within = false;     // value ≤ bound (1 + 1e-6)
};

DuhamelBound duhamel_bound_check(const ModeKey& key, const PhysParams& params, const SGrid& grid = {});

}  // namespace couette

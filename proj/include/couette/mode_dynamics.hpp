#pragma once

// Per-mode time integration of the weighted 2x2 system, the unweighted
// (δ̂, Â) system and the full (R̂, Â, Ω̂, Θ̂) system, plus the propagator
// Φ_L and the Duhamel representation of the forced weighted system.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "couette/spectral_core.hpp"
#include "couette/symbols.hpp"

namespace couette {

template <std::size_t N>
using CVec = std::array<cplx, N>;

struct StepPolicy {
  double base_dt = 0.05;
  double c_osc = 0.1;  // dt ≤ c_osc · M / √p
  double tol = 1e-8;   // relative local error per step; ≤ 0 disables step doubling
  std::uint64_t max_steps = 100'000'000;
};

void validate_policy(const StepPolicy& policy);

// Raised on step underflow, step budget exhaustion or a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, ModeKey key)
      : std::runtime_error(what + " at t=" + std::to_string(t) + " (k=" + std::to_string(key.k) +
                           ", eta=" + std::to_string(key.eta) + ")"),
        t_(t),
        key_(key) {}
  double time() const { return t_; }
  const ModeKey& key() const { return key_; }

 private:
  double t_;
  ModeKey key_;
};

inline constexpr double kMinStep = 1e-12;

struct FullModeState {
  cplx R, A, Omega, Theta;

  cplx beta() const { return R + Omega; }
  cplx big_gamma(double gamma) const { return Theta + (gamma - 1.0) * Omega; }
  cplx sigma(double gamma) const { return (gamma - 1.0) * R - Theta; }
  cplx delta(double gamma) const { return (R + Theta) / gamma; }
};

inline CVec<4> to_vec(const FullModeState& s) { return {s.R, s.A, s.Omega, s.Theta}; }
inline FullModeState to_full(const CVec<4>& v) { return {v[0], v[1], v[2], v[3]}; }
inline CVec<2> to_vec(const WeightedState& z) { return {z.z1, z.z2}; }
inline WeightedState to_weighted(const CVec<2>& v) { return {v[0], v[1]}; }
inline CVec<2> to_vec(const UnweightedState& s) { return {s.delta, s.a}; }
inline UnweightedState to_unweighted(const CVec<2>& v) { return {v[0], v[1]}; }

// A per-mode linear system: a state dimension, a right-hand side and the
// fastest local frequency (√p/M) for the oscillation step cap.
template <class S>
concept ModeSystem = requires(const S& s, double t, const CVec<S::dim>& z) {
  { s.rhs(t, z) } -> std::same_as<CVec<S::dim>>;
  { s.frequency(t) } -> std::convertible_to<double>;
  { s.key() } -> std::convertible_to<ModeKey>;
};

// Z' = L(t) Z + F(t) · source, source = β̂ⁱⁿ + Γ̂ⁱⁿ.
class WeightedSystem {
 public:
  static constexpr std::size_t dim = 2;
  WeightedSystem(ModeKey key, PhysParams params, Convention conv = Convention::derived, cplx source = {});
  CVec<2> rhs(double t, const CVec<2>& z) const;
  double frequency(double t) const;
  ModeKey key() const { return key_; }
  const PhysParams& params() const { return params_; }
  Convention convention() const { return conv_; }
  cplx source() const { return source_; }

 private:
  ModeKey key_;
  PhysParams params_;
  Convention conv_;
  cplx source_;
};

// δ̂' = -Â,  Â' = (∂_t p/p) Â + (p/M² + 2k²/p) δ̂ - 2k²/(γp) · source.
class UnweightedSystem {
 public:
  static constexpr std::size_t dim = 2;
  UnweightedSystem(ModeKey key, PhysParams params, cplx source = {});
  CVec<2> rhs(double t, const CVec<2>& s) const;
  double frequency(double t) const;
  ModeKey key() const { return key_; }

 private:
  ModeKey key_;
  PhysParams params_;
  cplx source_;
};

// R̂' = -Â,  Â' = (∂_t p/p) Â - (2k²/p) Ω̂ + p/(γM²) (R̂ + Θ̂),  Ω̂' = Â,  Θ̂' = -(γ-1) Â.
class FullSystem {
 public:
  static constexpr std::size_t dim = 4;
  FullSystem(ModeKey key, PhysParams params);
  CVec<4> rhs(double t, const CVec<4>& s) const;
  double frequency(double t) const;
  ModeKey key() const { return key_; }

 private:
  ModeKey key_;
  PhysParams params_;
};

// Both columns of Φ_L stacked as one state (Φ11, Φ21, Φ12, Φ22) so they share
// a single step sequence.
class PropagatorSystem {
 public:
  static constexpr std::size_t dim = 4;
  PropagatorSystem(ModeKey key, PhysParams params, Convention conv = Convention::derived)
      : inner_(key, params, conv) {}
  CVec<4> rhs(double t, const CVec<4>& s) const {
    const auto c1 = inner_.rhs(t, {s[0], s[1]});
    const auto c2 = inner_.rhs(t, {s[2], s[3]});
    return {c1[0], c1[1], c2[0], c2[1]};
  }
  double frequency(double t) const { return inner_.frequency(t); }
  ModeKey key() const { return inner_.key(); }

 private:
  WeightedSystem inner_;
};

template <std::size_t N>
struct Trajectory {
  std::vector<double> times;
  std::vector<CVec<N>> states;
  ModeKey key;
  PhysParams params;
  Convention convention = Convention::derived;
  std::uint64_t steps = 0;
  std::uint64_t rejected = 0;

  const CVec<N>& final_state() const { return states.back(); }
};

struct IntegrateOptions {
  double t_start = 0.0;
  // Record at multiples of sample_dt (and t_end); 0 records every accepted step.
  double sample_dt = 0.0;
  // Also record the half-step point of every accepted step (forces the
  // two-half-step update even when tol ≤ 0). Requires sample_dt == 0.
  bool record_midpoints = false;
};

namespace detail {

template <std::size_t N>
CVec<N> axpy(const CVec<N>& y, double h, const CVec<N>& k) {
  CVec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

template <ModeSystem S>
CVec<S::dim> rk4_step(const S& sys, double t, const CVec<S::dim>& y, double h) {
  const auto k1 = sys.rhs(t, y);
  const auto k2 = sys.rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = sys.rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = sys.rhs(t + h, axpy(y, h, k3));
  CVec<S::dim> out;
  for (std::size_t i = 0; i < S::dim; ++i) out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

template <std::size_t N>
double max_abs(const CVec<N>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

template <std::size_t N>
double max_abs_diff(const CVec<N>& a, const CVec<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Step-size growth/shrink factor from a relative error estimate.
inline double step_factor(double err, double tol) {
  if (err <= 0.0) return 2.0;
  return std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 2.0);
}

}  // namespace detail

// Classical RK4 with the oscillation cap dt ≤ min(base_dt, c_osc/frequency(t)).
// With tol > 0 each step is also taken as two half steps; the half-step
// result is kept and ‖y_half - y_full‖∞ / (15 ‖y‖∞) is the local error.
template <ModeSystem S>
Trajectory<S::dim> integrate(const S& sys, const CVec<S::dim>& state0, double t_end, const StepPolicy& policy,
                             const IntegrateOptions& opts = {}) {
  constexpr std::size_t N = S::dim;
  if (!(t_end > opts.t_start)) throw std::invalid_argument("t_end must be > t_start");
  validate_policy(policy);
  if (opts.record_midpoints && opts.sample_dt != 0.0) {
    throw std::invalid_argument("record_midpoints requires sample_dt == 0");
  }
  const ModeKey key = sys.key();
  const bool doubling = policy.tol > 0.0 || opts.record_midpoints;

  Trajectory<N> traj;
  traj.key = key;
  traj.times.push_back(opts.t_start);
  traj.states.push_back(state0);

  double t = opts.t_start;
  CVec<N> y = state0;
  double dt_try = policy.base_dt;
  std::size_t next_sample = 1;
  const double snap = 1e-9 * std::max(1.0, std::abs(t_end));
  auto sample_time = [&](std::size_t i) {
    if (opts.sample_dt <= 0.0) return t_end;
    const double ts = opts.t_start + static_cast<double>(i) * opts.sample_dt;
    return t_end - ts <= snap ? t_end : ts;
  };

  while (t < t_end) {
    const double target = sample_time(next_sample);
    const double cap = std::min(policy.base_dt, policy.c_osc / sys.frequency(t));
    const double proposal = std::min(dt_try, cap);
    const bool clipped = target - t <= proposal + 4.0 * kMinStep;
    const double h = clipped ? target - t : proposal;
    if (h < kMinStep) throw IntegrationError("step underflow (dt=" + std::to_string(h) + ")", t, key);
    if (++traj.steps > policy.max_steps) throw IntegrationError("step budget exhausted", t, key);

    CVec<N> y_new;
    CVec<N> y_mid{};
    double factor = 2.0;
    if (doubling) {
      y_mid = detail::rk4_step(sys, t, y, 0.5 * h);
      y_new = detail::rk4_step(sys, t + 0.5 * h, y_mid, 0.5 * h);
      if (policy.tol > 0.0) {
        const CVec<N> y_full = detail::rk4_step(sys, t, y, h);
        const double scale = std::max(detail::max_abs(y_new), detail::max_abs(y));
        const double err = scale > 0.0 ? detail::max_abs_diff(y_new, y_full) / (15.0 * scale) : 0.0;
        if (!std::isfinite(err)) throw IntegrationError("non-finite state", t, key);
        factor = detail::step_factor(err, policy.tol);
        if (err > policy.tol) {
          ++traj.rejected;
          dt_try = h * factor;
          continue;
        }
      }
    } else {
      y_new = detail::rk4_step(sys, t, y, h);
    }
    if (!std::isfinite(detail::max_abs(y_new))) throw IntegrationError("non-finite state", t, key);

    if (opts.record_midpoints) {
      traj.times.push_back(t + 0.5 * h);
      traj.states.push_back(y_mid);
    }
    t = clipped ? target : t + h;
    y = y_new;
    if (policy.tol > 0.0) dt_try = clipped ? std::max(dt_try, h * factor) : h * factor;

    if (opts.sample_dt == 0.0 || clipped) {
      traj.times.push_back(t);
      traj.states.push_back(y);
      if (clipped) ++next_sample;
    }
  }
  return traj;
}

// Φ_L(t_to, t_from) of the homogeneous weighted system, column-major
// {Φ11, Φ21, Φ12, Φ22}.
struct Propagator {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  double operator()(int row, int col) const { return m[static_cast<std::size_t>(col * 2 + row)]; }
  double det() const { return m[0] * m[3] - m[2] * m[1]; }
  Propagator operator*(const Propagator& o) const;
  WeightedState apply(const WeightedState& z) const;
  Propagator inverse() const;
};

Propagator propagator(const ModeKey& key, const PhysParams& params, double t_from, double t_to,
                      const StepPolicy& policy, Convention conv = Convention::derived);

// Z(t) = Φ_L(t,0) ( Z^in + ∫_0^t Φ_L(0,s) F(s) source ds ), with the integral
// evaluated by Simpson's rule on the propagator's own half-step samples.
WeightedState duhamel_solve(const WeightedState& z_in, cplx source, const ModeKey& key, const PhysParams& params,
                            double t_end, const StepPolicy& policy, Convention conv = Convention::derived);

}  // namespace couette

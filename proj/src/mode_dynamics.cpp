#include "couette/mode_dynamics.hpp"

namespace couette {

void validate_policy(const StepPolicy& policy) {
  if (!(policy.base_dt > 0.0)) throw std::invalid_argument("base_dt must be > 0");
  if (!(policy.c_osc > 0.0)) throw std::invalid_argument("c_osc must be > 0");
  if (std::isnan(policy.tol)) throw std::invalid_argument("tol must be a number");
  if (policy.max_steps == 0) throw std::invalid_argument("max_steps must be > 0");
}

WeightedSystem::WeightedSystem(ModeKey key, PhysParams params, Convention conv, cplx source)
    : key_(key), params_(params), conv_(conv), source_(source) {
  require_nonzero_mode(key_);
}

CVec<2> WeightedSystem::rhs(double t, const CVec<2>& z) const {
  const Mat2 L = matrix_L(t, key_, params_, conv_);
  const double f2 = forcing_F(t, key_, params_)[1];
  return {L.a11 * z[0] + L.a12 * z[1], L.a21 * z[0] + L.a22 * z[1] + f2 * source_};
}

double WeightedSystem::frequency(double t) const { return std::sqrt(symbol_p(t, key_)) / params_.mach; }

UnweightedSystem::UnweightedSystem(ModeKey key, PhysParams params, cplx source)
    : key_(key), params_(params), source_(source) {
  require_nonzero_mode(key_);
}

CVec<2> UnweightedSystem::rhs(double t, const CVec<2>& s) const {
  const double p = symbol_p(t, key_);
  const double dtp = symbol_dtp(t, key_);
  const double k2 = static_cast<double>(key_.k) * key_.k;
  const double m2 = params_.mach * params_.mach;
  return {-s[1], (dtp / p) * s[1] + (p / m2 + 2.0 * k2 / p) * s[0] - (2.0 * k2 / (params_.gamma * p)) * source_};
}

double UnweightedSystem::frequency(double t) const { return std::sqrt(symbol_p(t, key_)) / params_.mach; }

FullSystem::FullSystem(ModeKey key, PhysParams params) : key_(key), params_(params) { require_nonzero_mode(key_); }

CVec<4> FullSystem::rhs(double t, const CVec<4>& s) const {
  const double p = symbol_p(t, key_);
  const double dtp = symbol_dtp(t, key_);
  const double k2 = static_cast<double>(key_.k) * key_.k;
  const double g = params_.gamma;
  const double gm2 = g * params_.mach * params_.mach;
  const cplx& A = s[1];
  return {-A, (dtp / p) * A - (2.0 * k2 / p) * s[2] + (p / gm2) * (s[0] + s[3]), A, -(g - 1.0) * A};
}

double FullSystem::frequency(double t) const { return std::sqrt(symbol_p(t, key_)) / params_.mach; }

Propagator Propagator::operator*(const Propagator& o) const {
  Propagator r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r.m[static_cast<std::size_t>(j * 2 + i)] = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
    }
  }
  return r;
}

WeightedState Propagator::apply(const WeightedState& z) const {
  return {(*this)(0, 0) * z.z1 + (*this)(0, 1) * z.z2, (*this)(1, 0) * z.z1 + (*this)(1, 1) * z.z2};
}

Propagator Propagator::inverse() const {
  const double d = det();
  if (d == 0.0 || !std::isfinite(d)) throw std::domain_error("singular propagator");
  Propagator r;
  r.m = {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
  return r;
}

namespace {

Propagator from_state(const CVec<4>& s) { return {{s[0].real(), s[1].real(), s[2].real(), s[3].real()}}; }

}  // namespace

Propagator propagator(const ModeKey& key, const PhysParams& params, double t_from, double t_to,
                      const StepPolicy& policy, Convention conv) {
  require_nonzero_mode(key);
  if (t_from == t_to) return {};
  if (t_to < t_from) return propagator(key, params, t_to, t_from, policy, conv).inverse();
  const PropagatorSystem sys(key, params, conv);
  IntegrateOptions opts;
  opts.t_start = t_from;
  opts.sample_dt = t_to - t_from;
  const auto traj = integrate(sys, CVec<4>{1.0, 0.0, 0.0, 1.0}, t_to, policy, opts);
  return from_state(traj.final_state());
}

WeightedState duhamel_solve(const WeightedState& z_in, cplx source, const ModeKey& key, const PhysParams& params,
                            double t_end, const StepPolicy& policy, Convention conv) {
  require_nonzero_mode(key);
  const PropagatorSystem sys(key, params, conv);
  IntegrateOptions opts;
  opts.record_midpoints = true;
  const auto traj = integrate(sys, CVec<4>{1.0, 0.0, 0.0, 1.0}, t_end, policy, opts);

  // g(s) = Φ_L(s,0)^{-1} F(s) source
  auto integrand = [&](std::size_t i) {
    const Propagator inv = from_state(traj.states[i]).inverse();
    const double f2 = forcing_F(traj.times[i], key, params)[1];
    return WeightedState{inv(0, 1) * f2 * source, inv(1, 1) * f2 * source};
  };

  WeightedState acc = z_in;
  if (source != cplx{}) {
    // Samples come as (start, mid, end) triples sharing endpoints.
    WeightedState g0 = integrand(0);
    for (std::size_t i = 1; i + 1 < traj.times.size(); i += 2) {
      const double h = traj.times[i + 1] - traj.times[i - 1];
      const WeightedState gm = integrand(i);
      const WeightedState g1 = integrand(i + 1);
      acc.z1 += (h / 6.0) * (g0.z1 + 4.0 * gm.z1 + g1.z1);
      acc.z2 += (h / 6.0) * (g0.z2 + 4.0 * gm.z2 + g1.z2);
      g0 = g1;
    }
  }
  return from_state(traj.final_state()).apply(acc);
}

}  // namespace couette

#include "couette/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace couette {

namespace {

void init_lanes(std::span<const double> etas, std::size_t lanes, std::vector<double>& eta, double& lo, double& hi) {
  if (etas.empty()) throw std::invalid_argument("batch needs at least one eta");
  const std::size_t n = etas.size();
  eta.assign(lanes, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    eta[j] = etas[j];
    eta[n + j] = etas[j];
  }
  const auto [mn, mx] = std::minmax_element(etas.begin(), etas.end());
  lo = *mn;
  hi = *mx;
}

void check_lane(std::size_t j, std::size_t n) {
  if (j >= n) throw std::out_of_range("lane " + std::to_string(j) + " outside batch of " + std::to_string(n));
}

double max_p(double k, double lo, double hi, double t) {
  const double q = std::max(std::abs(lo - k * t), std::abs(hi - k * t));
  return k * k + q * q;
}

// Shared step loop. step(t, h, doubling) writes the candidate into the
// next-buffers and returns its error statistics; accept() swaps buffers.
template <class Step, class Accept, class Cap>
void run_steps(double& t, double t_target, double& dt_try, const StepPolicy& policy, std::uint64_t& steps,
               std::uint64_t& rejected, const ModeKey& key, Step&& step, Accept&& accept, Cap&& cap) {
  if (t_target < t) throw std::invalid_argument("batch cannot run backwards");
  const bool doubling = policy.tol > 0.0;
  while (t < t_target) {
    const double proposal = std::min(dt_try, cap(t));
    const bool clipped = t_target - t <= proposal + 4.0 * kMinStep;
    const double h = clipped ? t_target - t : proposal;
    if (h < kMinStep) throw IntegrationError("step underflow (dt=" + std::to_string(h) + ")", t, key);
    if (++steps > policy.max_steps) throw IntegrationError("step budget exhausted", t, key);
    const kernels::StepStats st = step(t, h, doubling);
    if (!std::isfinite(st.scale) || !std::isfinite(st.err)) throw IntegrationError("non-finite state", t, key);
    double factor = 2.0;
    if (doubling) {
      const double err = st.scale > 0.0 ? st.err / (15.0 * st.scale) : 0.0;
      factor = detail::step_factor(err, policy.tol);
      if (err > policy.tol) {
        ++rejected;
        dt_try = h * factor;
        continue;
      }
    }
    accept();
    t = clipped ? t_target : t + h;
    if (doubling) dt_try = clipped ? std::max(dt_try, h * factor) : h * factor;
  }
}

}  // namespace

FullBatch::FullBatch(int k, std::span<const double> etas, PhysParams params, StepPolicy policy,
                     const kernels::KernelTable& table)
    : k_(k),
      n_(etas.size()),
      lanes_(kernels::padded(2 * etas.size())),
      params_(validate_params(params)),
      policy_(policy),
      table_(&table),
      dt_try_(policy.base_dt) {
  require_nonzero_mode({k, 0.0});
  validate_policy(policy_);
  init_lanes(etas, lanes_, eta_, eta_lo_, eta_hi_);
  for (int c = 0; c < 4; ++c) {
    cur_[c].assign(lanes_, 0.0);
    next_[c].assign(lanes_, 0.0);
  }
  weight_.assign(lanes_, 0.0);
}

void FullBatch::set_state(std::size_t j, const FullModeState& s) {
  check_lane(j, n_);
  const cplx v[4] = {s.R, s.A, s.Omega, s.Theta};
  for (int c = 0; c < 4; ++c) {
    cur_[c].at(j) = v[c].real();
    cur_[c].at(n_ + j) = v[c].imag();
  }
}

FullModeState FullBatch::state(std::size_t j) const {
  check_lane(j, n_);
  auto get = [&](int c) { return cplx(cur_[c].at(j), cur_[c].at(n_ + j)); };
  return {get(0), get(1), get(2), get(3)};
}

void FullBatch::advance_to(double t_target) {
  kernels::FullStepArgs args;
  args.k = k_;
  args.gamma = params_.gamma;
  args.mach = params_.mach;
  args.n = lanes_;
  args.eta = eta_.data();
  for (int c = 0; c < 4; ++c) {
    args.in[c] = cur_[c].data();
    args.out[c] = next_[c].data();
  }
  auto step = [&](double t, double h, bool doubling) { return table_->full_step(args, t, h, doubling); };
  auto accept = [&] {
    for (int c = 0; c < 4; ++c) {
      cur_[c].swap(next_[c]);
      args.in[c] = cur_[c].data();
      args.out[c] = next_[c].data();
    }
  };
  auto cap = [&](double t) {
    return std::min(policy_.base_dt, policy_.c_osc * params_.mach / std::sqrt(max_p(k_, eta_lo_, eta_hi_, t)));
  };
  run_steps(t_, t_target, dt_try_, policy_, steps_, rejected_, ModeKey{k_, eta_hi_}, step, accept, cap);
}

kernels::NormSums FullBatch::norm_sums(std::span<const double> weights) const {
  if (weights.size() != n_) throw std::invalid_argument("norm weights must have one entry per eta");
  for (std::size_t j = 0; j < n_; ++j) {
    weight_[j] = weights[j];
    weight_[n_ + j] = weights[j];
  }
  kernels::NormArgs args;
  args.k = k_;
  args.gamma = params_.gamma;
  args.t = t_;
  args.n = lanes_;
  args.eta = eta_.data();
  args.weight = weight_.data();
  for (int c = 0; c < 4; ++c) args.in[c] = cur_[c].data();
  return table_->norm_sums(args);
}

WeightedBatch::WeightedBatch(int k, std::span<const double> etas, PhysParams params, StepPolicy policy,
                             Convention conv, const kernels::KernelTable& table)
    : k_(k),
      n_(etas.size()),
      lanes_(kernels::padded(2 * etas.size())),
      params_(validate_params(params)),
      policy_(policy),
      conv_(conv),
      table_(&table),
      dt_try_(policy.base_dt) {
  require_nonzero_mode({k, 0.0});
  validate_policy(policy_);
  init_lanes(etas, lanes_, eta_, eta_lo_, eta_hi_);
  source_.assign(lanes_, 0.0);
  for (int c = 0; c < 2; ++c) {
    cur_[c].assign(lanes_, 0.0);
    next_[c].assign(lanes_, 0.0);
  }
}

void WeightedBatch::set_state(std::size_t j, const WeightedState& z, cplx source) {
  check_lane(j, n_);
  cur_[0].at(j) = z.z1.real();
  cur_[0].at(n_ + j) = z.z1.imag();
  cur_[1].at(j) = z.z2.real();
  cur_[1].at(n_ + j) = z.z2.imag();
  source_.at(j) = source.real();
  source_.at(n_ + j) = source.imag();
}

WeightedState WeightedBatch::state(std::size_t j) const {
  check_lane(j, n_);
  return {cplx(cur_[0].at(j), cur_[0].at(n_ + j)), cplx(cur_[1].at(j), cur_[1].at(n_ + j))};
}

void WeightedBatch::advance_to(double t_target) {
  kernels::WeightedStepArgs args;
  args.k = k_;
  args.gamma = params_.gamma;
  args.mach = params_.mach;
  args.acoustic = conv_ == Convention::printed ? 2.0 : 1.0;
  args.n = lanes_;
  args.eta = eta_.data();
  args.source = source_.data();
  for (int c = 0; c < 2; ++c) {
    args.in[c] = cur_[c].data();
    args.out[c] = next_[c].data();
  }
  auto step = [&](double t, double h, bool doubling) { return table_->weighted_step(args, t, h, doubling); };
  auto accept = [&] {
    for (int c = 0; c < 2; ++c) {
      cur_[c].swap(next_[c]);
      args.in[c] = cur_[c].data();
      args.out[c] = next_[c].data();
    }
  };
  auto cap = [&](double t) {
    return std::min(policy_.base_dt, policy_.c_osc * params_.mach / std::sqrt(max_p(k_, eta_lo_, eta_hi_, t)));
  };
  run_steps(t_, t_target, dt_try_, policy_, steps_, rejected_, ModeKey{k_, eta_hi_}, step, accept, cap);
}

}  // namespace couette

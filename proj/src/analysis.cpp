#include "couette/analysis.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "couette/fields.hpp"
#include "couette/symbols.hpp"

namespace couette {

PowerFit fit_power_law(std::span<const double> times, std::span<const double> values, double t_lo, double t_hi) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw std::invalid_argument("fit window must satisfy 0 < t_lo < t_hi");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(values[i] > 0.0)) {
      throw std::invalid_argument("nonpositive value " + std::to_string(values[i]) + " at t=" + std::to_string(times[i]));
    }
    x.push_back(std::log(times[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 10) throw std::invalid_argument("power-law fit needs at least 10 samples in the window");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit window holds a single time");
  PowerFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.log_prefactor + fit.exponent * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.samples = x.size();
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  return fit;
}

std::vector<double> NormSeries::times() const { return column(&NormSample::t); }

std::vector<double> NormSeries::column(double NormSample::*field) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.*field);
  return out;
}

std::vector<double> NormSeries::compressible() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.compressible());
  return out;
}

DataNorms data_norms(const InitialFields& in, const PhysParams& params) {
  validate_params(params);
  const double g = params.gamma;
  const double M = params.mach;
  const SpectralField rt = (1.0 / (g * M)) * (in.rho + in.theta);
  const SpectralField s = (1.0 / g) * (in.rho + in.theta + g * in.omega);
  const SpectralField sig = (1.0 / M) * ((g - 1.0) * in.rho - in.theta);
  DataNorms d;
  d.e1_rt = aniso_norm(rt, -0.5, 0.0);
  d.e1_alpha = aniso_norm(in.alpha, -0.5, -1.0);
  d.e1_s = aniso_norm(s, -0.5, 0.5);
  d.e1_tail = aniso_norm(s, -1.0, 1.0);
  d.e2_rt = aniso_norm(rt, -0.5, 1.0);
  d.e2_alpha = aniso_norm(in.alpha, -0.5, 0.0);
  d.e2_s = aniso_norm(s, -0.5, 1.5);
  d.e2_tail = aniso_norm(s, -1.0, 2.0);
  d.e3_sigma = aniso_norm(sig, 0.0, 0.0);
  d.e3_rt = aniso_norm(rt, 0.0, 0.0);
  d.e3_alpha = iso_norm(in.alpha, -1.0);
  d.e3_s = iso_norm(s, 0.5);
  return d;
}

double pvx_bound(double t, const DataNorms& d, const PhysParams& params) {
  const double b = bracket(t);
  return params.mach / std::sqrt(b) * (d.e1_rt + d.e1_alpha + d.e1_s) + d.e1_tail / b;
}

double pvy_bound(double t, const DataNorms& d, const PhysParams& params) {
  const double b = bracket(t);
  return params.mach / (b * std::sqrt(b)) * (d.e2_rt + d.e2_alpha + d.e2_s) + d.e2_tail / (b * b);
}

double compressible_bound(double t, const DataNorms& d, const PhysParams& params) {
  return std::sqrt(bracket(t)) * ((params.gamma - 1.0) * d.e3_sigma + d.e3_rt + d.e3_alpha + d.e3_s);
}

namespace {

void track(double lhs, double rhs, double t, double& ratio, double& at, const char* name) {
  if (rhs == 0.0) {
    if (lhs != 0.0) {
      throw std::domain_error(std::string("zero data bound with nonzero ") + name + " at t=" + std::to_string(t) +
                              "; check the initial data");
    }
    return;
  }
  const double r = lhs / rhs;
  if (r > ratio) {
    ratio = r;
    at = t;
  }
}

}  // namespace

BoundReport theorem_bound_report(const NormSeries& series, const DataNorms& d, const PhysParams& params) {
  BoundReport rep;
  for (const auto& s : series.samples) {
    track(s.pvx, pvx_bound(s.t, d, params), s.t, rep.pvx, rep.pvx_at, "P[v]^x");
    track(s.pvy, pvy_bound(s.t, d, params), s.t, rep.pvy, rep.pvy_at, "P[v]^y");
    track(s.compressible(), compressible_bound(s.t, d, params), s.t, rep.compressible, rep.compressible_at,
          "compressible norm");
  }
  return rep;
}

namespace {

double forcing_profile(double u) { return std::pow(1.0 + u * u, -1.75); }

}  // namespace

double forcing_reference_constant() {
  boost::math::quadrature::sinh_sinh<double> integrator;
  return integrator.integrate(forcing_profile, std::sqrt(std::numeric_limits<double>::epsilon()));
}

double forcing_reference_closed_form() {
  return std::sqrt(kPi) * boost::math::tgamma(1.25) / boost::math::tgamma(1.75);
}

DuhamelBound duhamel_bound_check(const ModeKey& key, const PhysParams& params, const SGrid& grid) {
  require_nonzero_mode(key);
  validate_params(params);
  if (!(grid.s_max > 0.0) || grid.n < 3 || grid.n % 2 == 0) {
    throw std::invalid_argument("s grid needs s_max > 0 and an odd node count >= 3");
  }
  const double k = key.k;
  const double scale = params.gamma * std::pow(std::abs(k), 1.5);
  auto f = [&](double s) { return scale * std::abs(forcing_F(s, key, params)[1]); };
  const double h = grid.s_max / static_cast<double>(grid.n - 1);
  double sum = f(0.0) + f(grid.s_max);
  for (std::size_t i = 1; i + 1 < grid.n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(static_cast<double>(i) * h);
  DuhamelBound out;
  out.value = sum * h / 3.0;

  // Beyond s_max, γ|k|^{3/2}|F| = 2(1+u²)^{-7/4} with u = s - η/k, bounded by 2u^{-7/2}.
  const double U = grid.s_max - key.eta / k;
  if (!(U > 0.0)) throw std::domain_error("s grid ends before the critical time; tail estimate diverges");
  out.tail = 0.8 * std::pow(U, -2.5);
  out.value += out.tail;
  if (!std::isfinite(out.value)) throw std::domain_error("forcing integral is not finite");

  out.bound = forcing_reference_constant();
  boost::math::quadrature::exp_sinh<double> half_line;
  out.closed_form = 2.0 * half_line.integrate(forcing_profile, -key.eta / k, std::numeric_limits<double>::infinity());
  out.within = out.value <= out.bound * (1.0 + 1e-6);
  return out;
}

}  // namespace couette

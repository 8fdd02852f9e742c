#include "couette/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace couette {

FdState make_fd_state(const InitialDataSpec& spec, int k, const YGrid& grid) {
  if (k == 0) throw std::invalid_argument("fd oracle needs k != 0");
  if (grid.n < 5 || !(grid.half_width > 0.0)) throw std::invalid_argument("fd grid needs n >= 5 and L > 0");
  auto profile = [&](const PacketSpec& p) {
    if (!(p.width > 0.0)) throw std::invalid_argument("packet width must be > 0");
    cplx c = 0.0;
    for (const auto& h : p.harmonics) {
      if (h.k == 0) throw std::invalid_argument("initial data harmonics must have k != 0 (zero x-mean)");
      if (h.k == k) c += h.amplitude;
      if (h.k == -k) c += std::conj(h.amplitude);
    }
    std::vector<cplx> f(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double z = (grid[i] - p.center) / p.width;
      f[i] = c * p.amplitude * std::exp(-0.5 * z * z);
    }
    return f;
  };
  return {k, grid, 0.0, profile(spec.rho), profile(spec.alpha), profile(spec.omega), profile(spec.theta)};
}

std::vector<cplx> helmholtz_solve_fd(std::span<const cplx> rhs, int k, const YGrid& grid) {
  if (k == 0) throw std::invalid_argument("Helmholtz solve needs k != 0");
  const std::size_t n = grid.n;
  if (rhs.size() != n) throw std::invalid_argument("rhs size does not match the grid");
  std::vector<cplx> psi(n, 0.0);
  if (n < 3) return psi;
  const double h = grid.spacing();
  const double off = 1.0 / (h * h);
  const double diag = -2.0 / (h * h) - static_cast<double>(k) * k;
  // Interior unknowns 1..n-2; constant coefficients, so only the modified
  // diagonal needs storing.
  const std::size_t m = n - 2;
  std::vector<double> c(m);
  std::vector<cplx> d(m);
  double denom = diag;
  if (denom == 0.0) throw std::runtime_error("singular Helmholtz system");
  c[0] = off / denom;
  d[0] = rhs[1] / denom;
  for (std::size_t i = 1; i < m; ++i) {
    denom = diag - off * c[i - 1];
    if (denom == 0.0 || !std::isfinite(denom)) throw std::runtime_error("singular Helmholtz system");
    c[i] = off / denom;
    d[i] = (rhs[i + 1] - off * d[i - 1]) / denom;
  }
  psi[m] = d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) psi[i + 1] = d[i] - c[i] * psi[i + 2];
  return psi;
}

double fd_max_dt(const FdState& s, const PhysParams& params, const FdLimits& limits) {
  const double h = s.grid.spacing();
  return std::min(0.5 * params.mach * h, limits.phase_tol / (std::abs(static_cast<double>(s.k)) * s.grid.half_width));
}

namespace {

struct FdRates {
  std::vector<cplx> rho, alpha, omega, theta;
};

FdRates fd_rhs(const FdState& s, const PhysParams& params) {
  const std::size_t n = s.grid.n;
  const double h = s.grid.spacing();
  const double k = s.k;
  const double gm1 = params.gamma - 1.0;
  const double coef = 1.0 / (params.gamma * params.mach * params.mach);
  const cplx I(0.0, 1.0);
  const auto psi_a = helmholtz_solve_fd(s.alpha, s.k, s.grid);
  const auto psi_o = helmholtz_solve_fd(s.omega, s.k, s.grid);
  FdRates r{std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n)};
  // Boundary nodes stay at their (vanishing) Dirichlet values.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const cplx shear = -I * k * s.grid[i];
    const cplx a = s.alpha[i];
    r.rho[i] = shear * s.rho[i] - a;
    r.omega[i] = shear * s.omega[i] + a;
    r.theta[i] = shear * s.theta[i] - gm1 * a;
    const cplx dpsi = (psi_a[i + 1] - psi_a[i - 1]) / (2.0 * h);
    const cplx u_m = s.rho[i - 1] + s.theta[i - 1];
    const cplx u_0 = s.rho[i] + s.theta[i];
    const cplx u_p = s.rho[i + 1] + s.theta[i + 1];
    const cplx helm = (u_m - 2.0 * u_0 + u_p) / (h * h) - k * k * u_0;
    r.alpha[i] = shear * a - 2.0 * I * k * (dpsi + I * k * psi_o[i]) - coef * helm;
  }
  return r;
}

FdState fd_axpy(const FdState& y, double h, const FdRates& r) {
  FdState out = y;
  for (std::size_t i = 0; i < y.grid.n; ++i) {
    out.rho[i] += h * r.rho[i];
    out.alpha[i] += h * r.alpha[i];
    out.omega[i] += h * r.omega[i];
    out.theta[i] += h * r.theta[i];
  }
  return out;
}

double max_abs(const FdState& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.grid.n; ++i) {
    m = std::max({m, std::abs(s.rho[i]), std::abs(s.alpha[i]), std::abs(s.omega[i]), std::abs(s.theta[i])});
  }
  return m;
}

double edge_abs(const FdState& s) {
  double m = 0.0;
  // The nodes next to the boundary carry the contamination signal.
  for (std::size_t i : {std::size_t{1}, s.grid.n - 2}) {
    m = std::max({m, std::abs(s.rho[i]), std::abs(s.alpha[i]), std::abs(s.omega[i]), std::abs(s.theta[i])});
  }
  return m;
}

void check_state(const FdState& s) {
  if (s.k == 0) throw std::invalid_argument("fd oracle needs k != 0");
  const std::size_t n = s.grid.n;
  if (n < 5 || s.rho.size() != n || s.alpha.size() != n || s.omega.size() != n || s.theta.size() != n) {
    throw std::invalid_argument("fd profiles must match the grid (n >= 5)");
  }
}

}  // namespace

FdState step_fd(const FdState& s, const PhysParams& params, double dt, const FdLimits& limits) {
  validate_params(params);
  check_state(s);
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double h = s.grid.spacing();
  if (dt > 0.5 * params.mach * h * (1.0 + 1e-9)) {
    throw std::invalid_argument("acoustic CFL violation: dt=" + std::to_string(dt) +
                                " > 0.5*M*h=" + std::to_string(0.5 * params.mach * h));
  }
  const double phase = std::abs(static_cast<double>(s.k)) * s.grid.half_width * dt;
  if (phase > limits.phase_tol * (1.0 + 1e-9)) {
    throw std::invalid_argument("shear phase under-resolved: |k| L dt = " + std::to_string(phase));
  }
  const FdRates k1 = fd_rhs(s, params);
  const FdRates k2 = fd_rhs(fd_axpy(s, 0.5 * dt, k1), params);
  const FdRates k3 = fd_rhs(fd_axpy(s, 0.5 * dt, k2), params);
  const FdRates k4 = fd_rhs(fd_axpy(s, dt, k3), params);
  FdState out = s;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < s.grid.n; ++i) {
    out.rho[i] += w * (k1.rho[i] + 2.0 * (k2.rho[i] + k3.rho[i]) + k4.rho[i]);
    out.alpha[i] += w * (k1.alpha[i] + 2.0 * (k2.alpha[i] + k3.alpha[i]) + k4.alpha[i]);
    out.omega[i] += w * (k1.omega[i] + 2.0 * (k2.omega[i] + k3.omega[i]) + k4.omega[i]);
    out.theta[i] += w * (k1.theta[i] + 2.0 * (k2.theta[i] + k3.theta[i]) + k4.theta[i]);
  }
  out.t = s.t + dt;
  const double scale = max_abs(out);
  const double edge = edge_abs(out);
  if (!std::isfinite(scale) || (scale > 0.0 && edge > limits.boundary_tol * scale)) {
    throw std::runtime_error("fd boundary contamination at t=" + std::to_string(out.t) +
                             " (edge/max = " + std::to_string(scale > 0.0 ? edge / scale : edge) + ")");
  }
  return out;
}

FdState evolve_fd(const FdState& s, const PhysParams& params, double t_end, double dt, const FdLimits& limits) {
  if (!(t_end >= s.t)) throw std::invalid_argument("t_end must be >= the state time");
  FdState cur = s;
  while (cur.t < t_end) {
    const bool last = t_end - cur.t <= dt * (1.0 + 1e-10);
    const double h = last ? t_end - cur.t : dt;
    if (h <= 0.0) break;
    cur = step_fd(cur, params, h, limits);
    if (last) cur.t = t_end;
  }
  return cur;
}

double fd_l2(std::span<const cplx> f, const YGrid& grid) {
  const double h = grid.spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = (i == 0 || i + 1 == f.size()) ? 0.5 * h : h;
    sum += w * std::norm(f[i]);
  }
  return std::sqrt(2.0 * kPi * sum);
}

double FdDiscrepancy::max() const { return std::max({rho, alpha, omega, theta}); }

FdDiscrepancy compare_with_spectral(const FdState& fd, const SpectralField& R, const SpectralField& A,
                                    const SpectralField& Omega, const SpectralField& Theta) {
  check_state(fd);
  const EtaGrid& g = R.grid();
  const double period = 2.0 * kPi / g.spacing();
  if (period < 2.0 * fd.grid.half_width) {
    throw std::invalid_argument("eta grid too coarse: implied y-period " + std::to_string(period) +
                                " does not cover the fd domain");
  }
  if (!R.has_k(fd.k)) throw std::invalid_argument("spectral field has no row for k=" + std::to_string(fd.k));
  const auto y = fd.grid.points();
  auto rel = [&](const std::vector<cplx>& f, const SpectralField& s) {
    const auto prof = y_profile(s, fd.k, y, fd.t);
    std::vector<cplx> diff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) diff[i] = f[i] - prof[i];
    const double ref = fd_l2(f, fd.grid);
    const double err = fd_l2(diff, fd.grid);
    if (ref == 0.0) return err;
    return err / ref;
  };
  return {rel(fd.rho, R), rel(fd.alpha, A), rel(fd.omega, Omega), rel(fd.theta, Theta)};
}

TransportDrift transport_drift(const FdState& initial, const FdState& later, const PhysParams& params) {
  check_state(initial);
  check_state(later);
  if (initial.grid.n != later.grid.n) throw std::invalid_argument("fd grids differ");
  const double gm1 = params.gamma - 1.0;
  double scale_b = 0.0, scale_g = 0.0, db = 0.0, dg = 0.0;
  for (std::size_t i = 0; i < initial.grid.n; ++i) {
    const double b0 = std::abs(initial.rho[i] + initial.omega[i]);
    const double g0 = std::abs(initial.theta[i] + gm1 * initial.omega[i]);
    scale_b = std::max(scale_b, b0);
    scale_g = std::max(scale_g, g0);
    db = std::max(db, std::abs(std::abs(later.rho[i] + later.omega[i]) - b0));
    dg = std::max(dg, std::abs(std::abs(later.theta[i] + gm1 * later.omega[i]) - g0));
  }
  return {scale_b > 0.0 ? db / scale_b : db, scale_g > 0.0 ? dg / scale_g : dg};
}

}  // namespace couette

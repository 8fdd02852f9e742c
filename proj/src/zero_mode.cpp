#include "couette/zero_mode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace couette {

std::vector<double> ZeroModeState::sum_rho_theta() const {
  std::vector<double> s(size());
  for (std::size_t i = 0; i < size(); ++i) s[i] = rho[i] + theta[i];
  return s;
}

ZeroModeState make_zero_mode_state(double half_width, std::size_t n, const Profile& rho, const Profile& alpha,
                                   const Profile& omega, const Profile& theta) {
  if (!(half_width > 0.0)) throw std::invalid_argument("half width must be > 0");
  if (n < 5) throw std::invalid_argument("zero-mode grid needs at least 5 points");
  ZeroModeState s;
  s.half_width = half_width;
  s.rho.resize(n);
  s.alpha.resize(n);
  s.omega.resize(n);
  s.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = s.y(i);
    s.rho[i] = rho(y);
    s.alpha[i] = alpha(y);
    s.omega[i] = omega(y);
    s.theta[i] = theta(y);
  }
  return s;
}

namespace {

void check_layout(const ZeroModeState& s) {
  const std::size_t n = s.rho.size();
  if (n < 5 || s.alpha.size() != n || s.omega.size() != n || s.theta.size() != n) {
    throw std::invalid_argument("zero-mode profiles must share one grid of at least 5 points");
  }
  if (!(s.half_width > 0.0)) throw std::invalid_argument("half width must be > 0");
}

struct Rates {
  std::vector<double> rho, alpha, omega, theta;
};

void rhs(const ZeroModeState& s, double coef, double gm1, double inv_h2, Rates& r) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = s.alpha[i];
    r.rho[i] = -a;
    r.omega[i] = a;
    r.theta[i] = -gm1 * a;
  }
  r.alpha[0] = 0.0;
  r.alpha[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lap = (s.rho[i - 1] + s.theta[i - 1] - 2.0 * (s.rho[i] + s.theta[i]) + s.rho[i + 1] + s.theta[i + 1]) *
                       inv_h2;
    r.alpha[i] = -coef * lap;
  }
  // Dirichlet ends: boundary nodes are held fixed.
  r.rho[0] = r.rho[n - 1] = 0.0;
  r.omega[0] = r.omega[n - 1] = 0.0;
  r.theta[0] = r.theta[n - 1] = 0.0;
}

void axpy(const ZeroModeState& y, double h, const Rates& k, ZeroModeState& out) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.rho[i] = y.rho[i] + h * k.rho[i];
    out.alpha[i] = y.alpha[i] + h * k.alpha[i];
    out.omega[i] = y.omega[i] + h * k.omega[i];
    out.theta[i] = y.theta[i] + h * k.theta[i];
  }
}

// The end nodes are held fixed, so the first interior nodes are watched.
double boundary_max(const ZeroModeState& s) {
  double m = 0.0;
  for (std::size_t i : {std::size_t{1}, s.size() - 2}) {
    m = std::max({m, std::abs(s.rho[i]), std::abs(s.alpha[i]), std::abs(s.omega[i]), std::abs(s.theta[i])});
  }
  return m;
}

}  // namespace

ZeroModeState evolve_zero_mode(const ZeroModeState& s0, const PhysParams& params, double t_end, double dt,
                               const ZeroModeOptions& opts) {
  validate_params(params);
  check_layout(s0);
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double h = s0.spacing();
  if (dt > 0.5 * params.mach * h * (1.0 + 1e-12)) {
    throw std::invalid_argument("CFL violation: dt=" + std::to_string(dt) + " > 0.5*M*h=" +
                                std::to_string(0.5 * params.mach * h));
  }
  const double coef = 1.0 / (params.gamma * params.mach * params.mach);
  const double gm1 = params.gamma - 1.0;
  const double inv_h2 = 1.0 / (h * h);
  const std::size_t n = s0.size();

  ZeroModeState y = s0;
  ZeroModeState tmp = s0;
  Rates k1{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  Rates k2 = k1, k3 = k1, k4 = k1;
  double t = 0.0;
  while (t < t_end) {
    const double step = std::min(dt, t_end - t);
    rhs(y, coef, gm1, inv_h2, k1);
    axpy(y, 0.5 * step, k1, tmp);
    rhs(tmp, coef, gm1, inv_h2, k2);
    axpy(y, 0.5 * step, k2, tmp);
    rhs(tmp, coef, gm1, inv_h2, k3);
    axpy(y, step, k3, tmp);
    rhs(tmp, coef, gm1, inv_h2, k4);
    const double w = step / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      y.rho[i] += w * (k1.rho[i] + 2.0 * (k2.rho[i] + k3.rho[i]) + k4.rho[i]);
      y.alpha[i] += w * (k1.alpha[i] + 2.0 * (k2.alpha[i] + k3.alpha[i]) + k4.alpha[i]);
      y.omega[i] += w * (k1.omega[i] + 2.0 * (k2.omega[i] + k3.omega[i]) + k4.omega[i]);
      y.theta[i] += w * (k1.theta[i] + 2.0 * (k2.theta[i] + k3.theta[i]) + k4.theta[i]);
    }
    t = t_end - t <= dt ? t_end : t + step;
    const double edge = boundary_max(y);
    if (!std::isfinite(edge) || edge > opts.boundary_tol) {
      throw ContaminationError("boundary contamination: |profile| = " + std::to_string(edge) + " at t=" +
                               std::to_string(t) + "; enlarge the domain");
    }
    if (opts.observer) opts.observer(t, y);
  }
  return y;
}

namespace {

// Cubic (four-point Lagrange) interpolation of grid samples; the stencil is
// shifted inward near the ends.
double interp(const std::vector<double>& f, double half_width, double y) {
  const std::size_t n = f.size();
  const double h = 2.0 * half_width / static_cast<double>(n - 1);
  const double u = (y + half_width) / h;
  const double tol = 1e-9;
  if (u < -tol || u > static_cast<double>(n - 1) + tol) {
    throw std::out_of_range("d'Alembert evaluation at y=" + std::to_string(y) + " outside [-L, L]");
  }
  const double uc = std::clamp(u, 0.0, static_cast<double>(n - 1));
  const double node = std::round(uc);
  if (std::abs(uc - node) < tol) return f[static_cast<std::size_t>(node)];
  std::size_t i = static_cast<std::size_t>(uc);
  if (i >= n - 1) i = n - 2;
  std::size_t i0 = i == 0 ? 0 : i - 1;
  if (i0 + 3 >= n) i0 = n - 4;
  const double x = uc - static_cast<double>(i0);
  double out = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double l = 1.0;
    for (std::size_t b = 0; b < 4; ++b) {
      if (a != b) l *= (x - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
    }
    out += l * f[i0 + a];
  }
  return out;
}

// G_i = ∫_{-L}^{y_i} g, integrating the local cubic interpolant exactly cell by cell.
std::vector<double> antiderivative(const std::vector<double>& g, double h) {
  const std::size_t n = g.size();
  std::vector<double> G(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double cell;
    if (i == 0) {
      cell = h * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]) / 24.0;
    } else if (i + 2 == n) {
      cell = h * (9.0 * g[n - 1] + 19.0 * g[n - 2] - 5.0 * g[n - 3] + g[n - 4]) / 24.0;
    } else {
      cell = h * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]) / 24.0;
    }
    G[i + 1] = G[i] + cell;
  }
  return G;
}

}  // namespace

std::vector<double> dalembert(const std::vector<double>& u, const std::vector<double>& g, double half_width,
                              double c, double t, const std::vector<double>& y) {
  if (u.size() != g.size() || u.size() < 4) throw std::invalid_argument("d'Alembert needs matching profiles (n >= 4)");
  if (!(c > 0.0)) throw std::invalid_argument("wave speed must be > 0");
  const double h = 2.0 * half_width / static_cast<double>(u.size() - 1);
  const std::vector<double> G = antiderivative(g, h);
  // Feet outside the domain see the data extended by zero.
  const double edge = half_width * (1.0 + 1e-12);
  auto u_at = [&](double x) { return std::abs(x) > edge ? 0.0 : interp(u, half_width, x); };
  auto G_at = [&](double x) {
    if (x < -edge) return 0.0;
    if (x > edge) return G.back();
    return interp(G, half_width, x);
  };
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (t == 0.0) {
      out[i] = interp(u, half_width, y[i]);
      continue;
    }
    interp(u, half_width, y[i]);  // range check of the evaluation point
    const double lo = y[i] - c * t;
    const double hi = y[i] + c * t;
    out[i] = 0.5 * (u_at(lo) + u_at(hi)) + (G_at(hi) - G_at(lo)) / (2.0 * c);
  }
  return out;
}

std::vector<double> dalembert_reference(const ZeroModeState& s0, const PhysParams& params, double t) {
  validate_params(params);
  check_layout(s0);
  std::vector<double> g(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) g[i] = -params.gamma * s0.alpha[i];
  std::vector<double> y(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) y[i] = s0.y(i);
  return dalembert(s0.sum_rho_theta(), g, s0.half_width, 1.0 / params.mach, t, y);
}

RecoveredZeroFields recover_zero_fields(const std::vector<double>& rho_t, const ZeroModeState& initial,
                                        const PhysParams& params) {
  check_layout(initial);
  if (rho_t.size() != initial.size()) throw std::invalid_argument("rho profile does not match the initial grid");
  RecoveredZeroFields out{std::vector<double>(rho_t.size()), std::vector<double>(rho_t.size())};
  const double gm1 = params.gamma - 1.0;
  for (std::size_t i = 0; i < rho_t.size(); ++i) {
    const double d = rho_t[i] - initial.rho[i];
    out.omega[i] = initial.omega[i] - d;
    out.theta[i] = initial.theta[i] + gm1 * d;
  }
  return out;
}

double zero_mode_wave_energy(const ZeroModeState& s, const PhysParams& params) {
  check_layout(s);
  const double h = s.spacing();
  const double c2 = 1.0 / (params.mach * params.mach);
  const std::vector<double> sum = s.sum_rho_theta();
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double ga = params.gamma * s.alpha[i];
    e += h * ga * ga;
    if (i + 1 < s.size()) {
      const double d = (sum[i + 1] - sum[i]) / h;
      e += h * c2 * d * d;
    }
  }
  return e;
}

}  // namespace couette

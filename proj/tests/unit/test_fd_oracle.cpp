#include <doctest.h>

#include <cmath>

#include "couette/fd_oracle.hpp"
#include "couette/pipeline.hpp"

using namespace couette;

namespace {

InitialDataSpec gaussian_data(int k) {
  InitialDataSpec spec;
  spec.rho = {{{k, cplx(1.0, 0.2)}}, 0.3, 1.0, 1.0};
  spec.alpha = {{{k, cplx(-0.4, 0.5)}}, -0.2, 1.0, 1.0};
  spec.omega = {{{k, cplx(0.6, -0.3)}}, 0.1, 1.0, 1.0};
  spec.theta = {{{k, cplx(0.2, 0.8)}}, -0.4, 1.0, 1.0};
  return spec;
}

double helmholtz_error(std::size_t n) {
  const YGrid grid{10.0, n};
  std::vector<cplx> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = grid[i];
    rhs[i] = cplx(1.0, -0.5) * (4.0 * y * y - 3.0) * std::exp(-y * y);
  }
  const auto psi = helmholtz_solve_fd(rhs, 1, grid);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e = std::max(e, std::abs(psi[i] - cplx(1.0, -0.5) * std::exp(-grid[i] * grid[i])));
  }
  return e;
}

}  // namespace

TEST_CASE("Helmholtz solve: manufactured solution with second-order convergence") {
  const double e1 = helmholtz_error(401);
  const double e2 = helmholtz_error(801);
  const double e3 = helmholtz_error(1601);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Helmholtz solve: zero rhs, residual and errors") {
  const YGrid grid{5.0, 101};
  const std::vector<cplx> zero(101, 0.0);
  for (const cplx& v : helmholtz_solve_fd(zero, 2, grid)) CHECK(v == cplx(0.0));
  std::vector<cplx> rhs(101);
  for (std::size_t i = 0; i < 101; ++i) rhs[i] = cplx(std::sin(0.3 * i), std::cos(0.7 * i));
  const auto psi = helmholtz_solve_fd(rhs, 3, grid);
  const double h = grid.spacing();
  double res = 0.0, scale = 0.0;
  for (std::size_t i = 1; i + 1 < 101; ++i) {
    const cplx lhs = (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) / (h * h) - 9.0 * psi[i];
    res = std::max(res, std::abs(lhs - rhs[i]));
    scale = std::max(scale, std::abs(rhs[i]));
  }
  CHECK(res < 1e-12 * scale);
  CHECK_THROWS_AS(helmholtz_solve_fd(rhs, 0, grid), std::invalid_argument);
  CHECK_THROWS_AS(helmholtz_solve_fd(std::vector<cplx>(7), 1, grid), std::invalid_argument);
}

TEST_CASE("fd state construction") {
  const YGrid grid{16.0, 1025};
  const FdState s = make_fd_state(gaussian_data(1), 1, grid);
  CHECK(s.k == 1);
  CHECK(s.t == 0.0);
  CHECK(s.rho.size() == 1025);
  // ρ_1(y) = a A exp(-(y-c)²/(2w²)).
  const std::size_t mid = 512;
  CHECK(std::abs(s.rho[mid] - cplx(1.0, 0.2) * std::exp(-0.5 * 0.09)) < 1e-14);
  const FdState none = make_fd_state(gaussian_data(1), 2, grid);
  for (const cplx& v : none.rho) CHECK(v == cplx(0.0));
  CHECK_THROWS_AS(make_fd_state(gaussian_data(1), 0, grid), std::invalid_argument);
}

TEST_CASE("fd step: zero data and step-size guards") {
  const YGrid grid{8.0, 321};
  FdState z = make_fd_state(InitialDataSpec{}, 1, grid);
  const PhysParams pp{1.4, 1.0};
  const double dt = fd_max_dt(z, pp);
  CHECK(dt == doctest::Approx(std::min(0.5 * grid.spacing(), 0.05 / 8.0)));
  z = step_fd(z, pp, dt);
  CHECK(z.t == doctest::Approx(dt));
  for (const cplx& v : z.alpha) CHECK(v == cplx(0.0));
  CHECK_THROWS_AS(step_fd(z, pp, 1.01 * 0.5 * grid.spacing()), std::invalid_argument);
  FdState wide = make_fd_state(InitialDataSpec{}, 1, YGrid{100.0, 201});
  CHECK_THROWS_AS(step_fd(wide, pp, 0.001), std::invalid_argument);
}

TEST_CASE("fd step reports boundary contamination") {
  const YGrid grid{6.0, 241};
  const FdState s = make_fd_state(gaussian_data(1), 1, grid);
  const PhysParams pp{1.4, 1.0};
  CHECK_THROWS_AS(evolve_fd(s, pp, 6.0, fd_max_dt(s, pp)), std::runtime_error);
}

TEST_CASE("transported combinations keep their modulus pointwise") {
  const YGrid grid{32.0, 2049};
  const PhysParams pp{1.4, 1.0};
  const FdState s0 = make_fd_state(gaussian_data(1), 1, grid);
  const FdState s = evolve_fd(s0, pp, 5.0, fd_max_dt(s0, pp));
  CHECK(s.t == doctest::Approx(5.0));
  const TransportDrift d = transport_drift(s0, s, pp);
  MESSAGE("transport drift beta=" << d.beta << " gamma=" << d.gamma);
  CHECK(d.beta < 1e-6);
  CHECK(d.gamma < 1e-6);
}

TEST_CASE("Plancherel bridge between fd profiles and the spectral norm") {
  const InitialDataSpec spec = gaussian_data(1);
  const FdState fd = make_fd_state(spec, 1, YGrid{16.0, 2049});
  const EtaGrid eta = EtaGrid::symmetric(12.0, 801);
  const SpectralField f = make_packet(spec.rho, eta, {-1, 1});
  const std::size_t ki = f.k_index(1);
  double s = 0.0;
  for (std::size_t j = 0; j < eta.size(); ++j) s += eta.weight(j) * std::norm(f.at(ki, j));
  CHECK(fd_l2(fd.rho, fd.grid) == doctest::Approx(std::sqrt(s)).epsilon(1e-6));
}

TEST_CASE("spectral comparison at t = 0 sees only transform error") {
  const InitialDataSpec spec = gaussian_data(1);
  const FdState fd = make_fd_state(spec, 1, YGrid{16.0, 1025});
  const InitialFields in = make_packet(spec, EtaGrid::symmetric(12.0, 401));
  const FdDiscrepancy d = compare_with_spectral(fd, in.rho, in.alpha, in.omega, in.theta);
  CHECK(d.max() < 1e-8);
  const InitialFields coarse = make_packet(spec, EtaGrid::symmetric(12.0, 41));
  CHECK_THROWS_AS(compare_with_spectral(fd, coarse.rho, coarse.alpha, coarse.omega, coarse.theta),
                  std::invalid_argument);
}

TEST_CASE("fd and spectral paths agree after evolution and converge under refinement") {
  const auto levels = oracle_study({1.4, 1.0}, 1, 1.0, 2);
  REQUIRE(levels.size() == 2);
  for (const auto& l : levels) {
    MESSAGE("fd=" << l.fd_points << " eta=" << l.eta_points << " max discrepancy=" << l.discrepancy.max());
  }
  CHECK(levels[0].discrepancy.max() < 1e-3);
  CHECK(levels[1].discrepancy.rho < levels[0].discrepancy.rho);
  CHECK(levels[1].discrepancy.alpha < levels[0].discrepancy.alpha);
  CHECK(levels[1].discrepancy.omega < levels[0].discrepancy.omega);
  CHECK(levels[1].discrepancy.theta < levels[0].discrepancy.theta);
}

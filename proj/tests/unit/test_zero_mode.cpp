#include <doctest.h>

#include <cmath>

#include "couette/zero_mode.hpp"

using namespace couette;

namespace {

double gauss(double y, double c, double w) {
  const double z = (y - c) / w;
  return std::exp(-0.5 * z * z);
}

Profile zero() {
  return [](double) { return 0.0; };
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("zero-mode state construction") {
  const auto s = make_zero_mode_state(5.0, 11, zero(), zero(), zero(), zero());
  CHECK(s.size() == 11);
  CHECK(s.spacing() == doctest::Approx(1.0));
  CHECK(s.y(0) == -5.0);
  CHECK(s.y(10) == doctest::Approx(5.0));
  CHECK_THROWS_AS(make_zero_mode_state(5.0, 3, zero(), zero(), zero(), zero()), std::invalid_argument);
  CHECK_THROWS_AS(make_zero_mode_state(0.0, 11, zero(), zero(), zero(), zero()), std::invalid_argument);
}

TEST_CASE("zero data persists exactly") {
  const auto s0 = make_zero_mode_state(10.0, 201, zero(), zero(), zero(), zero());
  const auto s = evolve_zero_mode(s0, {1.4, 1.0}, 3.0, 0.02);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.rho[i] == 0.0);
    CHECK(s.alpha[i] == 0.0);
    CHECK(s.omega[i] == 0.0);
    CHECK(s.theta[i] == 0.0);
  }
}

TEST_CASE("a wide plateau evolves linearly where the Laplacian vanishes") {
  // Flat-topped profile with smooth shoulders far from the centre.
  auto plateau = [](double y) { return 0.5 * (std::tanh(y + 60.0) - std::tanh(y - 60.0)); };
  const PhysParams pp{1.4, 1.0};
  const double a0 = 0.3;
  const auto s0 = make_zero_mode_state(
      100.0, 2001, [&](double y) { return 0.7 * plateau(y); }, [&](double y) { return a0 * plateau(y); },
      [&](double y) { return 0.2 * plateau(y); }, [&](double y) { return -0.1 * plateau(y); });
  ZeroModeOptions opts;
  opts.boundary_tol = 1e-6;
  const double t = 2.0;
  const auto s = evolve_zero_mode(s0, pp, t, 0.02, opts);
  const std::size_t mid = s.size() / 2;
  CHECK(s.rho[mid] == doctest::Approx(0.7 - a0 * t).epsilon(1e-10));
  CHECK(s.theta[mid] == doctest::Approx(-0.1 - (pp.gamma - 1.0) * a0 * t).epsilon(1e-10));
  CHECK(s.omega[mid] == doctest::Approx(0.2 + a0 * t).epsilon(1e-10));
  CHECK(s.alpha[mid] == doctest::Approx(a0).epsilon(1e-10));
}

TEST_CASE("CFL and contamination errors") {
  const auto s0 = make_zero_mode_state(10.0, 201, [](double y) { return gauss(y, 0.0, 1.0); }, zero(), zero(), zero());
  // h = 0.1, so dt must be ≤ 0.05 M.
  CHECK_THROWS_AS(evolve_zero_mode(s0, {1.4, 1.0}, 1.0, 0.06), std::invalid_argument);
  CHECK_THROWS_AS(evolve_zero_mode(s0, {1.4, 0.5}, 1.0, 0.03), std::invalid_argument);
  CHECK_NOTHROW(evolve_zero_mode(s0, {1.4, 1.0}, 1.0, 0.05));
  CHECK_THROWS_AS(evolve_zero_mode(s0, {1.4, 1.0}, 9.0, 0.05), ContaminationError);
}

TEST_CASE("d'Alembert reference examples") {
  const PhysParams pp{1.4, 1.0};
  const auto s0 = make_zero_mode_state(
      20.0, 4001, [](double y) { return gauss(y, 0.0, 1.0); }, zero(), zero(), [](double y) { return 0.5 * gauss(y, 0.0, 1.0); });
  const auto at0 = dalembert_reference(s0, pp, 0.0);
  const auto u0 = s0.sum_rho_theta();
  for (std::size_t i = 0; i < u0.size(); ++i) CHECK(std::abs(at0[i] - u0[i]) <= 1e-14 * std::abs(u0[i]));

  const auto r = dalembert_reference(s0, pp, 3.0);
  for (std::size_t i = 0; i < s0.size(); i += 50) {
    const double y = s0.y(i);
    const double expect = 0.75 * (gauss(y, -3.0, 1.0) + gauss(y, 3.0, 1.0));
    CHECK(std::abs(r[i] - expect) < 1e-8);
  }
  CHECK_THROWS_AS(dalembert(u0, u0, 20.0, 1.0, 1.0, {25.0}), std::out_of_range);
  CHECK_NOTHROW(dalembert(u0, u0, 20.0, 1.0, 1.0, {19.5}));
}

TEST_CASE("d'Alembert velocity term integrates the initial rate exactly for a Gaussian") {
  // u = 0, g = e^{-y²/2}: s(t,y) = (1/(2c)) ∫_{y-ct}^{y+ct} g = (√(π/2)/(2c)) [erf((y+ct)/√2) - erf((y-ct)/√2)].
  const std::size_t n = 4001;
  const double L = 20.0;
  std::vector<double> u(n, 0.0), g(n), ys;
  for (std::size_t i = 0; i < n; ++i) g[i] = gauss(-L + 2.0 * L * i / (n - 1), 0.0, 1.0);
  for (double y = -5.0; y <= 5.0; y += 0.37) ys.push_back(y);
  const double c = 2.0;
  const double t = 1.5;
  const auto s = dalembert(u, g, L, c, t, ys);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    const double expect = std::sqrt(kPi / 2.0) / (2.0 * c) * (std::erf((y + c * t) / std::sqrt(2.0)) - std::erf((y - c * t) / std::sqrt(2.0)));
    CHECK(std::abs(s[i] - expect) < 1e-9);
  }
}

TEST_CASE("method of lines matches d'Alembert and recovers omega and theta") {
  const PhysParams pp{1.4, 1.0};
  const double w = 4.0;
  const auto s0 = make_zero_mode_state(
      2.0 + 8.0 * w + 1.0, 4096, [&](double y) { return gauss(y, 0.5, w); },
      [&](double y) { return 0.3 * gauss(y, -0.5, w); }, [&](double y) { return 0.5 * gauss(y, 0.0, w); },
      [&](double y) { return -0.7 * gauss(y, 0.5, w); });
  const double dt = 0.25 * pp.mach * s0.spacing();
  const auto s = evolve_zero_mode(s0, pp, 2.0, dt);
  const auto ref = dalembert_reference(s0, pp, 2.0);
  CHECK(max_abs_diff(s.sum_rho_theta(), ref) < 1e-6);

  const auto rec = recover_zero_fields(s.rho, s0, pp);
  CHECK(max_abs_diff(rec.omega, s.omega) < 1e-8);
  CHECK(max_abs_diff(rec.theta, s.theta) < 1e-8);
}

TEST_CASE("recover_zero_fields examples") {
  const auto s0 = make_zero_mode_state(
      5.0, 21, [](double y) { return gauss(y, 0.0, 1.0); }, zero(), [](double y) { return 0.5 * gauss(y, 1.0, 1.0); },
      [](double y) { return -gauss(y, -1.0, 1.0); });
  const auto same = recover_zero_fields(s0.rho, s0, {1.4, 1.0});
  CHECK(same.omega == s0.omega);
  CHECK(same.theta == s0.theta);
  std::vector<double> moved = s0.rho;
  for (double& v : moved) v += 0.25;
  const auto iso = recover_zero_fields(moved, s0, {1.0 + 1e-12, 1.0});
  CHECK(max_abs_diff(iso.theta, s0.theta) < 1e-12);
  const auto g = recover_zero_fields(moved, s0, {2.0, 1.0});
  for (std::size_t i = 0; i < g.omega.size(); ++i) {
    CHECK(g.omega[i] == doctest::Approx(s0.omega[i] - 0.25));
    CHECK(g.theta[i] == doctest::Approx(s0.theta[i] + 0.25));
  }
}

TEST_CASE("wave energy is conserved and alpha obeys its own wave equation") {
  const PhysParams pp{1.4, 0.5};
  const double w = 4.0;
  const auto s0 = make_zero_mode_state(
      0.5 + 2.0 / pp.mach + 8.0 * w, 4096, [&](double y) { return gauss(y, 0.5, w); },
      [&](double y) { return 0.3 * gauss(y, -0.5, w); }, zero(), [&](double y) { return -0.7 * gauss(y, 0.5, w); });
  const double e0 = zero_mode_wave_energy(s0, pp);
  double drift = 0.0;
  ZeroModeOptions opts;
  opts.observer = [&](double, const ZeroModeState& s) {
    drift = std::max(drift, std::abs(zero_mode_wave_energy(s, pp) - e0) / e0);
  };
  const auto s = evolve_zero_mode(s0, pp, 2.0, 0.25 * pp.mach * s0.spacing(), opts);
  CHECK(drift < 1e-6);

  const std::size_t n = s0.size();
  const double h = s0.spacing();
  const auto u0 = s0.sum_rho_theta();
  std::vector<double> g(n, 0.0), ys(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    g[i] = -(u0[i - 1] - 2.0 * u0[i] + u0[i + 1]) / (h * h) / (pp.gamma * pp.mach * pp.mach);
  }
  for (std::size_t i = 0; i < n; ++i) ys[i] = s0.y(i);
  const auto aref = dalembert(s0.alpha, g, s0.half_width, 1.0 / pp.mach, 2.0, ys);
  CHECK(max_abs_diff(s.alpha, aref) < 1e-6);
}

TEST_CASE("second-order convergence of the method of lines") {
  const PhysParams pp{1.4, 1.0};
  auto err = [&](std::size_t n) {
    const auto s0 = make_zero_mode_state(20.0, n, [](double y) { return gauss(y, 0.0, 1.5); }, zero(), zero(), zero());
    const auto s = evolve_zero_mode(s0, pp, 2.0, 0.2 * s0.spacing());
    return max_abs_diff(s.sum_rho_theta(), dalembert_reference(s0, pp, 2.0));
  };
  const double e1 = err(401);
  const double e2 = err(801);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

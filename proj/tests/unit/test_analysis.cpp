#include <doctest.h>

#include <cmath>

#include "couette/analysis.hpp"
#include "couette/pipeline.hpp"

using namespace couette;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.params = {1.4, 0.5};
  cfg.grid = EtaGrid(-1.25, 1.25, 64);
  cfg.k_set = {1};
  cfg.initial.rho = {{{1, cplx(1.0, 0.3)}}, 1.5, 8.0, 1.0};
  cfg.initial.alpha = {{{1, cplx(-0.4, 0.7)}}, -2.0, 8.0, 1.0};
  cfg.initial.omega = {{{1, cplx(0.6, -0.5)}}, 0.5, 8.0, 1.0};
  cfg.initial.theta = {{{1, cplx(0.3, 0.9)}}, -1.0, 8.0, 1.0};
  cfg.t_end = 20.0;
  cfg.sample_dt = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("power-law fit examples") {
  const auto t = linspace(1.0, 100.0, 200);
  std::vector<double> a, b;
  for (double s : t) {
    a.push_back(std::pow(s, -0.5));
    b.push_back(3.0 * std::pow(s, -1.5));
  }
  const PowerFit fa = fit_power_law(t, a, 1.0, 100.0);
  CHECK(fa.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fa.residual < 1e-12);
  CHECK(fa.samples == 200);
  const PowerFit fb = fit_power_law(t, b, 10.0, 100.0);
  CHECK(fb.exponent == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fb.log_prefactor == doctest::Approx(std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("power-law fit errors") {
  const auto t = linspace(1.0, 100.0, 50);
  std::vector<double> v(t.size(), 1.0);
  CHECK_THROWS_AS(fit_power_law(t, v, 95.0, 100.0), std::invalid_argument);
  v[40] = 0.0;
  CHECK_THROWS_AS(fit_power_law(t, v, 1.0, 100.0), std::invalid_argument);
  CHECK_NOTHROW(fit_power_law(t, v, 1.0, 50.0));
  CHECK_THROWS_AS(fit_power_law(t, std::vector<double>(3, 1.0), 1.0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law(t, v, 0.0, 100.0), std::invalid_argument);
}

TEST_CASE("property: the fit is exact for any pure power law") {
  for (int i = 0; i < 50; ++i) {
    const double e = -2.0 + 0.08 * i;
    const double c = 0.1 + 0.2 * i;
    const auto t = linspace(5.0, 500.0, 100);
    std::vector<double> v;
    for (double s : t) v.push_back(c * std::pow(s, e));
    CHECK(fit_power_law(t, v, 50.0, 500.0).exponent == doctest::Approx(e).epsilon(1e-10));
  }
}

TEST_CASE("bound report for zero data is all zeros") {
  NormSeries s;
  for (int i = 0; i <= 10; ++i) {
    NormSample x;
    x.t = i;
    s.samples.push_back(x);
  }
  const BoundReport r = theorem_bound_report(s, DataNorms{}, {1.4, 1.0});
  CHECK(r.pvx == 0.0);
  CHECK(r.pvy == 0.0);
  CHECK(r.compressible == 0.0);
  s.samples[3].pvx = 1e-3;
  CHECK_THROWS_AS(theorem_bound_report(s, DataNorms{}, {1.4, 1.0}), std::domain_error);
}

TEST_CASE("bound time weights") {
  DataNorms d;
  d.e1_rt = 1.0;
  d.e1_tail = 1.0;
  d.e2_rt = 1.0;
  d.e2_tail = 1.0;
  d.e3_rt = 1.0;
  const PhysParams pp{1.4, 0.5};
  const double t = 99.0;
  const double br = std::sqrt(1.0 + t * t);
  CHECK(pvx_bound(t, d, pp) == doctest::Approx(0.5 / std::sqrt(br) + 1.0 / br));
  CHECK(pvy_bound(t, d, pp) == doctest::Approx(0.5 / std::pow(br, 1.5) + 1.0 / (br * br)));
  CHECK(compressible_bound(t, d, pp) == doctest::Approx(std::sqrt(br)));
}

TEST_CASE("theorem constants are invariant under doubling the data") {
  RunConfig cfg = small_config();
  const SimulationResult a = simulate(cfg, Convention::derived);
  for (auto* p : {&cfg.initial.rho, &cfg.initial.alpha, &cfg.initial.omega, &cfg.initial.theta}) p->amplitude *= 2.0;
  const SimulationResult b = simulate(cfg, Convention::derived);
  const BoundReport ra = theorem_bound_report(a.series, data_norms(a.initial, cfg.params), cfg.params);
  const BoundReport rb = theorem_bound_report(b.series, data_norms(b.initial, cfg.params), cfg.params);
  CHECK(std::isfinite(ra.pvx));
  CHECK(ra.pvx > 0.0);
  CHECK(rb.pvx == doctest::Approx(ra.pvx).epsilon(1e-10));
  CHECK(rb.pvy == doctest::Approx(ra.pvy).epsilon(1e-10));
  CHECK(rb.compressible == doctest::Approx(ra.compressible).epsilon(1e-10));
}

TEST_CASE("data norms of zero data vanish and scale linearly") {
  const RunConfig cfg = small_config();
  const InitialFields in = initial_fields(cfg);
  const DataNorms d = data_norms(in, cfg.params);
  CHECK(d.e1_rt > 0.0);
  CHECK(d.e3_sigma > 0.0);
  InitialFields twice = in;
  twice.rho *= 2.0;
  twice.alpha *= 2.0;
  twice.omega *= 2.0;
  twice.theta *= 2.0;
  const DataNorms d2 = data_norms(twice, cfg.params);
  CHECK(d2.e2_s == doctest::Approx(2.0 * d.e2_s));
  CHECK(d2.e1_tail == doctest::Approx(2.0 * d.e1_tail));
  InitialFields zero = in;
  zero.rho *= 0.0;
  zero.alpha *= 0.0;
  zero.omega *= 0.0;
  zero.theta *= 0.0;
  const DataNorms d0 = data_norms(zero, cfg.params);
  CHECK(d0.e1_rt == 0.0);
  CHECK(d0.e3_s == 0.0);
}

TEST_CASE("forcing reference constant") {
  const double c = forcing_reference_constant();
  CHECK(c == doctest::Approx(1.74805).epsilon(1e-5));
  CHECK(c == doctest::Approx(forcing_reference_closed_form()).epsilon(1e-12));
}

TEST_CASE("forcing integral examples") {
  const DuhamelBound b = duhamel_bound_check({1, 0.0}, {1.0 + 1e-9, 1.0});
  CHECK(b.value > 0.0);
  CHECK(b.value <= 1.74805);
  CHECK(b.within);
  CHECK(b.value == doctest::Approx(b.closed_form).epsilon(1e-8));
  CHECK_THROWS_AS(duhamel_bound_check({0, 0.0}, {1.4, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(duhamel_bound_check({1, 0.0}, {1.4, 1.0}, SGrid{200.0, 100}), std::invalid_argument);
}

TEST_CASE("property: the forcing integral stays below twice the reference constant") {
  const double c = forcing_reference_constant();
  for (int k : {-3, -1, 1, 2, 5}) {
    for (double eta : {-20.0, -1.0, 0.0, 0.5, 3.0, 10.0}) {
      for (double g : {1.1, 1.4, 3.0}) {
        INFO("k=" << k << " eta=" << eta << " gamma=" << g);
        const DuhamelBound b = duhamel_bound_check({k, eta}, {g, 1.0});
        CHECK(b.value == doctest::Approx(b.closed_form).epsilon(1e-7));
        CHECK(b.value <= 2.0 * c * (1.0 + 1e-6));
      }
    }
  }
}

TEST_CASE("property: the whole-line forcing integral is independent of eta") {
  const double c = forcing_reference_constant();
  for (double eta : {0.0, 0.7, 3.0, 10.0, 40.0}) {
    for (int k : {1, 2, 3}) {
      INFO("k=" << k << " eta=" << eta);
      const double whole = duhamel_bound_check({k, eta}, {1.4, 1.0}).value + duhamel_bound_check({k, -eta}, {1.4, 1.0}).value;
      CHECK(whole == doctest::Approx(2.0 * c).epsilon(1e-7));
    }
  }
}

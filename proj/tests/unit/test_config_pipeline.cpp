#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "couette/config.hpp"
#include "couette/pipeline.hpp"

using namespace couette;
namespace fs = std::filesystem;

namespace {

const char* kText = R"([params]
gamma = 1.4
mach = 0.5

[grid]
eta_min = -1.25
eta_max = 1.25
n_eta = 64
k_set = 1, 2

[initial.rho]
harmonics = 1:1.0:0.3, 2:0.5:0
center = 1.5
width = 8
amplitude = 1

[initial.alpha]
harmonics = 1:-0.4:0.7
center = -2
width = 8

[initial.omega]
center = 0.5
width = 8

[initial.theta]
harmonics = 2:0.3:0.9
width = 8

[run]
t_end = 20
sample_dt = 0.5
base_dt = 0.05
c_osc = 0.1
tol = 0
convention = derived
out_dir = out/test
seed = 7
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("couette_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config(kText);
  CHECK(cfg.params.gamma == 1.4);
  CHECK(cfg.params.mach == 0.5);
  CHECK(cfg.grid.size() == 64);
  CHECK(cfg.k_set == std::vector<int>{1, 2});
  CHECK(cfg.k_list() == std::vector<int>{-2, -1, 1, 2});
  REQUIRE(cfg.initial.rho.harmonics.size() == 2);
  CHECK(cfg.initial.rho.harmonics[0].amplitude == cplx(1.0, 0.3));
  CHECK(cfg.initial.alpha.center == -2.0);
  CHECK(cfg.initial.omega.harmonics.size() == 2);  // seeded, one per k
  CHECK(cfg.t_end == 20.0);
  CHECK(cfg.policy.tol == 0.0);
  CHECK(cfg.out_dir == "out/test");
  CHECK(cfg.seed == 7);
  const RunConfig again = parse_config(kText);
  CHECK(again.initial.omega.harmonics[1].amplitude == cfg.initial.omega.harmonics[1].amplitude);
  const RunConfig round = parse_config(format_config(cfg));
  CHECK(format_config(round) == format_config(cfg));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[params]\ngamma = 0.9\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[params]\nlambda = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[params]\nmach = fast\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[grid]\nk_set = 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[initial.rho]\nharmonics = 3:1:1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[initial.rho]\nharmonics = 1:1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[run]\nconvention = other\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[run]\nt_end = -1\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.ini"), std::runtime_error);
}

TEST_CASE("sample times include the end point") {
  CHECK(sample_times(2.0, 0.5) == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  const auto s = sample_times(1.0, 0.3);
  CHECK(s.back() == 1.0);
  CHECK(s.size() == 5);
}

TEST_CASE("parallel_for visits every index and rethrows") {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 4);
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }, 3),
                  std::runtime_error);
}

TEST_CASE("grid warnings flag aliasing horizons") {
  RunConfig cfg = parse_config(kText);
  CHECK(!grid_warnings(cfg).empty());
  cfg.t_end = 1.0;
  cfg.grid = EtaGrid(-1.25, 1.25, 4096);
  CHECK(grid_warnings(cfg).empty());
}

TEST_CASE("spectral evolution matches the simulated norm series") {
  RunConfig cfg = parse_config(kText);
  const SimulationResult r = simulate(cfg, Convention::derived);
  const SpectralState s = evolve_spectral(r.initial, cfg.params, cfg.t_end, cfg.policy);
  const double gm = cfg.params.gamma / cfg.params.mach;
  CHECK(r.series.samples.back().t == cfg.t_end);
  CHECK(r.series.samples.back().rho_scaled == doctest::Approx(gm * aniso_norm(s.R, 0, 0)).epsilon(1e-7));
  CHECK(r.series.samples.back().theta_scaled == doctest::Approx(gm * aniso_norm(s.Theta, 0, 0)).epsilon(1e-7));
  CHECK(s.R.hermitian_defect() < 1e-14);
}

TEST_CASE("printed convention differs from the derived one") {
  RunConfig cfg = parse_config(kText);
  const SimulationResult d = simulate(cfg, Convention::derived);
  const SimulationResult p = simulate(cfg, Convention::printed);
  CHECK(d.series.samples[0].qv == doctest::Approx(p.series.samples[0].qv).epsilon(1e-12));
  CHECK(std::abs(d.series.samples.back().qv - p.series.samples.back().qv) > 1e-3 * d.series.samples.back().qv);
}

TEST_CASE("zero initial data gives an all-zero series and success") {
  RunConfig cfg;
  cfg.grid = EtaGrid(-1.0, 1.0, 32);
  cfg.t_end = 20.0;
  cfg.sample_dt = 1.0;
  cfg.initial.rho.harmonics = {{1, cplx(0.0)}};
  const fs::path dir = scratch("zero");
  cfg.out_dir = dir.string();
  const RunOutcome out = run_config(cfg);
  CHECK(out.ok);
  REQUIRE(out.primary.has_value());
  for (const auto& s : out.primary->series.samples) {
    CHECK(s.pvx == 0.0);
    CHECK(s.qv == 0.0);
    CHECK(s.rho_scaled == 0.0);
  }
  CHECK(fs::exists(dir / "norms.csv"));
  CHECK(fs::exists(dir / "report.json"));
  const std::string csv = slurp(dir / "norms.csv");
  CHECK(csv.rfind("t,pvx_l2,pvy_l2,qv_l2,rho_l2_scaled,theta_l2_scaled,lyap_ratio_min,lyap_ratio_max,beta_drift,gamma_drift,sigma_drift\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("identical configs give byte-identical norms.csv") {
  RunConfig cfg = parse_config(kText);
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  cfg.out_dir = a.string();
  run_config(cfg);
  cfg.out_dir = b.string();
  run_config(cfg);
  const std::string ca = slurp(a / "norms.csv");
  CHECK(!ca.empty());
  CHECK(ca == slurp(b / "norms.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("invariant checks pass on a regular run") {
  const RunConfig cfg = parse_config(kText);
  const SimulationResult r = simulate(cfg, Convention::derived);
  for (const auto& c : invariant_checks(r)) {
    INFO(c.name << " value=" << c.value << " limit=" << c.limit);
    CHECK(c.pass);
  }
}

TEST_CASE("atomic writes replace the target") {
  const fs::path dir = scratch("atomic");
  fs::create_directories(dir);
  const fs::path f = dir / "x.txt";
  write_atomic(f.string(), "one");
  write_atomic(f.string(), "two");
  CHECK(slurp(f) == "two");
  std::size_t count = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++count;
  CHECK(count == 1);
  fs::remove_all(dir);
}

#pragma once

// End-to-end runs: packet → invariants → lane-batched mode evolution → norm
// series → fits and bound ratios → CSV/JSON outputs.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "couette/analysis.hpp"
#include "couette/config.hpp"
#include "couette/fd_oracle.hpp"
#include "couette/fields.hpp"
#include "couette/kernels.hpp"

namespace couette {

// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
// The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

// Sample times 0, dt, 2dt, … with t_end always included last.
std::vector<double> sample_times(double t_end, double sample_dt);

// Fields of the whole spectrum at one time.
struct SpectralState {
  double t = 0.0;
  SpectralField R;
  SpectralField A;
  SpectralField Omega;
  SpectralField Theta;
};

// Evolves the full four-field system of every mode to time t.
SpectralState evolve_spectral(const InitialFields& in, const PhysParams& params, double t, const StepPolicy& policy,
                              const kernels::KernelTable& table = kernels::active());

struct SimulationResult {
  Convention convention = Convention::derived;
  InitialFields initial;
  NormSeries series;
  std::uint64_t steps = 0;
  std::uint64_t rejected = 0;
  std::string isa;
  std::vector<std::string> warnings;
};

// Aliasing and truncation warnings for the configured grid and horizon.
std::vector<std::string> grid_warnings(const RunConfig& cfg);

InitialFields initial_fields(const RunConfig& cfg);

// derived: integrates the full (R̂, Â, Ω̂, Θ̂) system. printed: integrates the
// weighted system with the printed matrix and reconstructs through the invariants.
SimulationResult simulate(const RunConfig& cfg, Convention conv,
                          const kernels::KernelTable& table = kernels::active());

struct FitSet {
  PowerFit pvx;
  PowerFit pvy;
  PowerFit compressible;
};

// Fits over [0.1 t_end, t_end]; throws like fit_power_law.
FitSet fit_rates(const NormSeries& series, double t_end);

// Outcome of the invariant suites of one run.
struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

std::vector<InvariantCheck> invariant_checks(const SimulationResult& r);

// Exactly the bytes of norms.csv.
std::string norms_csv(const NormSeries& series);

// Writes `content` to `path` through a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

struct RunOutcome {
  bool ok = false;
  std::string out_dir;
  std::optional<SimulationResult> primary;  // set by run_config
  std::vector<std::string> messages;
};

// simulate, fits, bounds and checks; writes norms.csv (and norms_printed.csv
// for the printed convention) and report.json into cfg.out_dir.
RunOutcome run_config(const RunConfig& cfg);

// Grid of (γ, M) points from cfg.sweep (missing lists fall back to cfg.params);
// writes sweep.csv and sweep.json.
RunOutcome run_sweep(const RunConfig& cfg);

// `samples` random data sets drawn from cfg.seed on cfg's grid; fits the growth
// exponent of each and writes rates.csv and rates.json.
RunOutcome run_rates(const RunConfig& cfg, std::size_t samples);

// Zero-mode wave check against d'Alembert for every Mach number in
// cfg.sweep.mach (or cfg.params.mach); writes zero_mode.json.
struct ZeroModeCheck {
  double mach = 1.0;
  double max_error = 0.0;
  double energy_drift = 0.0;
  double alpha_error = 0.0;
};
ZeroModeCheck zero_mode_check(const PhysParams& params, double t, std::size_t n);
RunOutcome run_zero_mode(const RunConfig& cfg);

// FD oracle against the spectral path at k, time t, base resolution level 0
// and refinement levels 1.. (each doubles the y and η resolution).
struct OracleLevel {
  std::size_t fd_points = 0;
  std::size_t eta_points = 0;
  double dt = 0.0;
  FdDiscrepancy discrepancy;
};
std::vector<OracleLevel> oracle_study(const PhysParams& params, int k, double t, std::size_t levels);
RunOutcome run_oracle(const RunConfig& cfg);

// Forcing-integral table over k ∈ {1,2,3}, η ∈ {0,1,10}, γ ∈ {1.4, 2}; writes duhamel.csv/json.
RunOutcome run_duhamel(const RunConfig& cfg);

}  // namespace couette

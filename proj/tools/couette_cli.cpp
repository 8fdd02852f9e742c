#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "couette/pipeline.hpp"

namespace {

int report(const couette::RunOutcome& out, const char* what) {
  for (const auto& m : out.messages) std::fprintf(stderr, "%s\n", m.c_str());
  std::fprintf(stderr, "%s: %s (outputs in %s)\n", what, out.ok ? "pass" : "FAIL", out.out_dir.c_str());
  return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized compressible Couette flow: spectral simulator and checks"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::string simd;
  app.add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Override the configured output directory");
  app.add_option("--simd", simd, "Kernel variant: scalar, avx2 or avx512 (default: widest supported)");

  auto* simulate = app.add_subcommand("simulate", "Run the configured simulation; writes norms.csv and report.json");
  auto* sweep = app.add_subcommand("sweep", "Repeat the simulation over the [sweep] gamma/mach grid");
  auto* rates = app.add_subcommand("rates", "Growth-exponent distribution over seeded random data");
  std::size_t samples = 8;
  rates->add_option("--samples", samples, "Number of random data sets")->check(CLI::PositiveNumber);
  auto* zero = app.add_subcommand("zero-mode", "Zero-mode solver against the d'Alembert solution");
  auto* oracle = app.add_subcommand("oracle-compare", "Finite-difference oracle against the spectral path at t=1");
  auto* duhamel = app.add_subcommand("duhamel-bound", "Forcing-integral bound table");
  for (auto* sub : {simulate, sweep, rates, zero, oracle, duhamel}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!simd.empty()) setenv("COUETTE_SIMD", simd.c_str(), 1);
    couette::RunConfig cfg = config_path.empty() ? couette::RunConfig{} : couette::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (config_path.empty() && (*simulate || *sweep || *rates)) {
      std::fprintf(stderr, "%s needs --config\n", app.get_subcommands().front()->get_name().c_str());
      return 2;
    }
    if (*simulate) return report(couette::run_config(cfg), "simulate");
    if (*sweep) return report(couette::run_sweep(cfg), "sweep");
    if (*rates) return report(couette::run_rates(cfg, samples), "rates");
    if (*zero) return report(couette::run_zero_mode(cfg), "zero-mode");
    if (*oracle) return report(couette::run_oracle(cfg), "oracle-compare");
    if (*duhamel) return report(couette::run_duhamel(cfg), "duhamel-bound");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

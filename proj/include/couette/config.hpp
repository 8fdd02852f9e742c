#pragma once

// Run configuration and its INI-style text format.

#include <cstdint>
#include <string>
#include <vector>

#include "couette/mode_dynamics.hpp"
#include "couette/spectral_core.hpp"
#include "couette/symbols.hpp"

namespace couette {

struct SweepSpec {
  std::vector<double> gamma;
  std::vector<double> mach;
};

struct RunConfig {
  PhysParams params;
  EtaGrid grid{-1.25, 1.25, 512};
  std::vector<int> k_set{1};  // positive wavenumbers; the field carries ±k
  InitialDataSpec initial;
  double t_end = 500.0;
  double sample_dt = 1.0;
  StepPolicy policy;
  Convention convention = Convention::derived;
  SweepSpec sweep;
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  std::vector<int> k_list() const;  // sorted ±k_set
};

// Throws std::invalid_argument describing the first problem found.
void validate_config(const RunConfig& cfg);

// Sections [params], [grid], [initial.rho|alpha|omega|theta], [run], [sweep].
// An [initial.*] section without `harmonics` gets one harmonic per entry of
// k_set with seeded random amplitude.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string format_config(const RunConfig& cfg);

// Uniform double in [0, 1) from a 64-bit engine output, identical on every platform.
inline double unit_from_bits(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

}  // namespace couette

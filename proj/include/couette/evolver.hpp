#pragma once

// Lane-batched evolution of many η values of one wavenumber with a shared
// step sequence. The step cap uses the largest p over the batch, so every
// lane is at least as well resolved as it would be when integrated alone.

#include <cstdint>
#include <span>
#include <vector>

#include "couette/kernels.hpp"
#include "couette/mode_dynamics.hpp"

namespace couette {

class FullBatch {
 public:
  FullBatch(int k, std::span<const double> etas, PhysParams params, StepPolicy policy,
            const kernels::KernelTable& table = kernels::active());

  std::size_t size() const { return n_; }
  int k() const { return k_; }
  double time() const { return t_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t rejected() const { return rejected_; }
  const kernels::KernelTable& table() const { return *table_; }

  void set_state(std::size_t j, const FullModeState& s);
  FullModeState state(std::size_t j) const;
  // Throws IntegrationError on underflow, budget exhaustion or non-finite state.
  void advance_to(double t_target);
  // Σ_j w_j (…) over the given per-η weights (size() entries).
  kernels::NormSums norm_sums(std::span<const double> weights) const;

 private:
  int k_;
  std::size_t n_;
  std::size_t lanes_;
  PhysParams params_;
  StepPolicy policy_;
  const kernels::KernelTable* table_;
  double eta_lo_ = 0.0;
  double eta_hi_ = 0.0;
  std::vector<double> eta_;  // lane j and n+j carry the same η (real, imaginary part)
  std::vector<double> cur_[4];
  std::vector<double> next_[4];
  mutable std::vector<double> weight_;
  double t_ = 0.0;
  double dt_try_;
  std::uint64_t steps_ = 0;
  std::uint64_t rejected_ = 0;
};

class WeightedBatch {
 public:
  WeightedBatch(int k, std::span<const double> etas, PhysParams params, StepPolicy policy,
                Convention conv = Convention::derived, const kernels::KernelTable& table = kernels::active());

  std::size_t size() const { return n_; }
  int k() const { return k_; }
  double time() const { return t_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t rejected() const { return rejected_; }

  void set_state(std::size_t j, const WeightedState& z, cplx source = {});
  WeightedState state(std::size_t j) const;
  void advance_to(double t_target);

 private:
  int k_;
  std::size_t n_;
  std::size_t lanes_;
  PhysParams params_;
  StepPolicy policy_;
  Convention conv_;
  const kernels::KernelTable* table_;
  double eta_lo_ = 0.0;
  double eta_hi_ = 0.0;
  std::vector<double> eta_;
  std::vector<double> source_;
  std::vector<double> cur_[2];
  std::vector<double> next_[2];
  double t_ = 0.0;
  double dt_try_;
  std::uint64_t steps_ = 0;
  std::uint64_t rejected_ = 0;
};

}  // namespace couette

#pragma once

// Physical parameters, η grids, the moving-frame spectral field container,
// Gaussian initial packets and the anisotropic Sobolev norms.
//
// Fourier convention (used everywhere in the library):
//   f̂(k,η) = (1/2π) ∫_0^{2π} ∫_R e^{-i(kx+ηy)} f(x,y) dy dx
// so that ‖f‖²_{L²} = Σ_k ∫ |f̂(k,η)|² dη.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace couette {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct PhysParams {
  double gamma = 1.4;  // ratio of specific heats
  double mach = 1.0;   // Mach number of the reference state
};

// Throws std::invalid_argument unless gamma > 1 and mach > 0.
PhysParams validate_params(PhysParams p);

struct ModeKey {
  int k = 1;
  double eta = 0.0;
};

// Throws std::invalid_argument for k == 0.
void require_nonzero_mode(const ModeKey& key);

// Japanese brackets ⟨a⟩ = (1+a²)^{1/2}, ⟨a,b⟩ = (1+a²+b²)^{1/2}.
inline double bracket(double a) { return std::sqrt(1.0 + a * a); }
inline double bracket(double a, double b) { return std::sqrt(1.0 + a * a + b * b); }

// Uniform η grid, symmetric about 0. Mirror points are bit-exact negatives
// of each other so Hermitian partners land on grid points.
class EtaGrid {
 public:
  EtaGrid(double eta_min, double eta_max, std::size_t n);
  static EtaGrid symmetric(double half_width, std::size_t n) { return {-half_width, half_width, n}; }

  double eta_min() const { return eta_min_; }
  double eta_max() const { return eta_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }
  double operator[](std::size_t j) const;
  std::size_t mirror(std::size_t j) const { return n_ - 1 - j; }
  // Composite trapezoid weight of node j.
  double weight(std::size_t j) const;

  bool operator==(const EtaGrid& o) const {
    return eta_min_ == o.eta_min_ && eta_max_ == o.eta_max_ && n_ == o.n_;
  }

 private:
  double eta_min_;
  double eta_max_;
  std::size_t n_;
  double spacing_;
};

// Complex amplitudes f̂(k, η_j) of a real field. The k list is sorted,
// excludes 0 and is closed under negation.
class SpectralField {
 public:
  SpectralField(std::vector<int> k_list, EtaGrid grid);

  const std::vector<int>& k_list() const { return k_list_; }
  const EtaGrid& grid() const { return grid_; }
  std::size_t k_count() const { return k_list_.size(); }
  std::size_t k_index(int k) const;
  bool has_k(int k) const;

  cplx& at(std::size_t ki, std::size_t j) { return amp_[ki * grid_.size() + j]; }
  const cplx& at(std::size_t ki, std::size_t j) const { return amp_[ki * grid_.size() + j]; }
  std::span<cplx> row(std::size_t ki) { return {amp_.data() + ki * grid_.size(), grid_.size()}; }
  std::span<const cplx> row(std::size_t ki) const {
    return {amp_.data() + ki * grid_.size(), grid_.size()};
  }
  std::span<const cplx> data() const { return amp_; }

  bool same_layout(const SpectralField& o) const { return k_list_ == o.k_list_ && grid_ == o.grid_; }
  // Largest |f̂(-k,-η) - conj f̂(k,η)| over all stored pairs.
  double hermitian_defect() const;
  bool is_zero() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

 private:
  std::vector<int> k_list_;
  EtaGrid grid_;
  std::vector<cplx> amp_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Multiplies every amplitude by a real symbol m(k, η). Preserves Hermitian
// symmetry when m(-k,-η) = m(k,η).
SpectralField scale_by(SpectralField f, const std::function<double(int, double)>& symbol);

struct Harmonic {
  int k = 1;
  cplx amplitude{1.0, 0.0};
};

// f(x,y) = Σ_h (a_h e^{i k_h x} + c.c.) · A exp(-(y-c)²/(2w²))
struct PacketSpec {
  std::vector<Harmonic> harmonics;
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
};

struct InitialDataSpec {
  PacketSpec rho;
  PacketSpec alpha;
  PacketSpec omega;
  PacketSpec theta;
};

struct InitialFields {
  SpectralField rho;
  SpectralField alpha;
  SpectralField omega;
  SpectralField theta;
};

// Sorted ±|k| union over all harmonics of all four packets.
std::vector<int> packet_k_list(const InitialDataSpec& spec);

SpectralField make_packet(const PacketSpec& spec, const EtaGrid& grid, const std::vector<int>& k_list);
InitialFields make_packet(const InitialDataSpec& spec, const EtaGrid& grid);

// (Σ_k ∫ ⟨k⟩^{2 s1} ⟨η⟩^{2 s2} |f̂|² dη)^{1/2}, trapezoid in η.
double aniso_norm(const SpectralField& f, double s1, double s2);
// (Σ_k ∫ ⟨k,η⟩^{2 s} |f̂|² dη)^{1/2}
double iso_norm(const SpectralField& f, double s);

// Uniform y grid on [-half_width, half_width].
struct YGrid {
  double half_width = 10.0;
  std::size_t n = 1024;

  double spacing() const { return 2.0 * half_width / static_cast<double>(n - 1); }
  double operator[](std::size_t i) const { return -half_width + static_cast<double>(i) * spacing(); }
  std::vector<double> points() const;
};

// x-Fourier coefficient f_k(y) = (1/2π) Σ_j w_j f̂(k,η_j) e^{i(η_j - k·shear_t) y}.
// With shear_t = 0 this is the plain inverse transform in y.
std::vector<cplx> y_profile(const SpectralField& f, int k, std::span<const double> y, double shear_t = 0.0);

// (2π Σ_k ∫ |f_k(y)|² dy)^{1/2} on the given y grid (trapezoid).
double physical_l2_norm(const SpectralField& f, const YGrid& grid);

}  // namespace couette

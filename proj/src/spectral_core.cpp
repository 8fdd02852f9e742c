#include "couette/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace couette {

PhysParams validate_params(PhysParams p) {
  if (!(p.gamma > 1.0) || !std::isfinite(p.gamma)) {
    throw std::invalid_argument("gamma must be > 1 (got " + std::to_string(p.gamma) + ")");
  }
  if (!(p.mach > 0.0) || !std::isfinite(p.mach)) {
    throw std::invalid_argument("mach must be > 0 (got " + std::to_string(p.mach) + ")");
  }
  return p;
}

void require_nonzero_mode(const ModeKey& key) {
  if (key.k == 0) throw std::invalid_argument("x-wavenumber k must be nonzero");
}

EtaGrid::EtaGrid(double eta_min, double eta_max, std::size_t n)
    : eta_min_(eta_min), eta_max_(eta_max), n_(n), spacing_(0.0) {
  if (n < 2) throw std::invalid_argument("eta grid needs at least 2 points");
  if (!(eta_min < eta_max)) throw std::invalid_argument("eta_min must be < eta_max");
  if (eta_min != -eta_max) throw std::invalid_argument("eta grid must be symmetric about 0");
  spacing_ = (eta_max - eta_min) / static_cast<double>(n - 1);
}

double EtaGrid::operator[](std::size_t j) const {
  // Upper half is mirrored from the lower half so η_{n-1-j} == -η_j exactly.
  if (2 * j + 1 < n_) return eta_min_ + static_cast<double>(j) * spacing_;
  if (2 * j + 1 == n_) return 0.0;
  const std::size_t m = mirror(j);
  return -(eta_min_ + static_cast<double>(m) * spacing_);
}

double EtaGrid::weight(std::size_t j) const {
  return (j == 0 || j + 1 == n_) ? 0.5 * spacing_ : spacing_;
}

SpectralField::SpectralField(std::vector<int> k_list, EtaGrid grid)
    : k_list_(std::move(k_list)), grid_(grid) {
  std::sort(k_list_.begin(), k_list_.end());
  if (std::adjacent_find(k_list_.begin(), k_list_.end()) != k_list_.end()) {
    throw std::invalid_argument("duplicate wavenumber in k list");
  }
  for (int k : k_list_) {
    if (k == 0) throw std::invalid_argument("spectral field cannot store the k = 0 mode");
    if (!std::binary_search(k_list_.begin(), k_list_.end(), -k)) {
      throw std::invalid_argument("k list must be closed under negation (missing " + std::to_string(-k) + ")");
    }
  }
  amp_.assign(k_list_.size() * grid_.size(), cplx{});
}

std::size_t SpectralField::k_index(int k) const {
  auto it = std::lower_bound(k_list_.begin(), k_list_.end(), k);
  if (it == k_list_.end() || *it != k) throw std::out_of_range("wavenumber " + std::to_string(k) + " not stored");
  return static_cast<std::size_t>(it - k_list_.begin());
}

bool SpectralField::has_k(int k) const { return std::binary_search(k_list_.begin(), k_list_.end(), k); }

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t ki = 0; ki < k_count(); ++ki) {
    const std::size_t mi = k_index(-k_list_[ki]);
    for (std::size_t j = 0; j < grid_.size(); ++j) {
      worst = std::max(worst, std::abs(at(mi, grid_.mirror(j)) - std::conj(at(ki, j))));
    }
  }
  return worst;
}

bool SpectralField::is_zero() const {
  return std::all_of(amp_.begin(), amp_.end(), [](const cplx& z) { return z == cplx{}; });
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!same_layout(o)) throw std::invalid_argument("spectral field layout mismatch");
  for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] += o.amp_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!same_layout(o)) throw std::invalid_argument("spectral field layout mismatch");
  for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] -= o.amp_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& z : amp_) z *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField scale_by(SpectralField f, const std::function<double(int, double)>& symbol) {
  for (std::size_t ki = 0; ki < f.k_count(); ++ki) {
    const int k = f.k_list()[ki];
    for (std::size_t j = 0; j < f.grid().size(); ++j) f.at(ki, j) *= symbol(k, f.grid()[j]);
  }
  return f;
}

std::vector<int> packet_k_list(const InitialDataSpec& spec) {
  std::vector<int> ks;
  for (const PacketSpec* p : {&spec.rho, &spec.alpha, &spec.omega, &spec.theta}) {
    for (const auto& h : p->harmonics) {
      if (h.k == 0) throw std::invalid_argument("initial data harmonics must have k != 0 (zero x-mean)");
      ks.push_back(std::abs(h.k));
      ks.push_back(-std::abs(h.k));
    }
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

SpectralField make_packet(const PacketSpec& spec, const EtaGrid& grid, const std::vector<int>& k_list) {
  if (!(spec.width > 0.0)) throw std::invalid_argument("packet width must be > 0");
  SpectralField f(k_list, grid);
  // Coefficient c_k of e^{ikx}; the real field needs c_{-k} = conj(c_k).
  std::map<int, cplx> coeff;
  for (const auto& h : spec.harmonics) {
    if (h.k == 0) throw std::invalid_argument("initial data harmonics must have k != 0 (zero x-mean)");
    coeff[h.k] += h.amplitude;
    coeff[-h.k] += std::conj(h.amplitude);
  }
  const double w = spec.width;
  const double norm = spec.amplitude * w * std::sqrt(2.0 * kPi);
  for (const auto& [k, c] : coeff) {
    const std::size_t ki = f.k_index(k);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double eta = grid[j];
      const double mag = norm * std::exp(-0.5 * w * w * eta * eta);
      f.at(ki, j) = c * mag * std::polar(1.0, -spec.center * eta);
    }
  }
  return f;
}

InitialFields make_packet(const InitialDataSpec& spec, const EtaGrid& grid) {
  const auto ks = packet_k_list(spec);
  if (ks.empty()) throw std::invalid_argument("initial data has no harmonics");
  return {make_packet(spec.rho, grid, ks), make_packet(spec.alpha, grid, ks),
          make_packet(spec.omega, grid, ks), make_packet(spec.theta, grid, ks)};
}

namespace {

template <class Weight>
double weighted_norm(const SpectralField& f, Weight&& weight) {
  const EtaGrid& g = f.grid();
  double sum = 0.0;
  for (std::size_t ki = 0; ki < f.k_count(); ++ki) {
    const int k = f.k_list()[ki];
    for (std::size_t j = 0; j < g.size(); ++j) {
      sum += g.weight(j) * weight(k, g[j]) * std::norm(f.at(ki, j));
    }
  }
  return std::sqrt(sum);
}

}  // namespace

double aniso_norm(const SpectralField& f, double s1, double s2) {
  return weighted_norm(f, [s1, s2](int k, double eta) {
    return std::pow(bracket(static_cast<double>(k)), 2.0 * s1) * std::pow(bracket(eta), 2.0 * s2);
  });
}

double iso_norm(const SpectralField& f, double s) {
  return weighted_norm(f, [s](int k, double eta) { return std::pow(bracket(static_cast<double>(k), eta), 2.0 * s); });
}

std::vector<double> YGrid::points() const {
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = (*this)[i];
  return y;
}

std::vector<cplx> y_profile(const SpectralField& f, int k, std::span<const double> y, double shear_t) {
  const std::size_t ki = f.k_index(k);
  const EtaGrid& g = f.grid();
  std::vector<cplx> out(y.size());
  const double shift = static_cast<double>(k) * shear_t;
  for (std::size_t i = 0; i < y.size(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < g.size(); ++j) {
      acc += g.weight(j) * f.at(ki, j) * std::polar(1.0, (g[j] - shift) * y[i]);
    }
    out[i] = acc / (2.0 * kPi);
  }
  return out;
}

double physical_l2_norm(const SpectralField& f, const YGrid& grid) {
  const auto y = grid.points();
  const double h = grid.spacing();
  double sum = 0.0;
  for (int k : f.k_list()) {
    const auto prof = y_profile(f, k, y);
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const double w = (i == 0 || i + 1 == prof.size()) ? 0.5 * h : h;
      sum += w * std::norm(prof[i]);
    }
  }
  return std::sqrt(2.0 * kPi * sum);
}

}  // namespace couette

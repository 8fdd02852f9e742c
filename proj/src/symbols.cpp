#include "couette/symbols.hpp"

#include <stdexcept>
#include <string>

namespace couette {

const char* to_string(Convention c) { return c == Convention::derived ? "derived" : "printed"; }

Convention convention_from_string(const std::string& s) {
  if (s == "derived") return Convention::derived;
  if (s == "printed") return Convention::printed;
  throw std::invalid_argument("unknown convention '" + s + "' (expected derived or printed)");
}

double symbol_p(double t, const ModeKey& key) {
  require_nonzero_mode(key);
  const double k = key.k;
  const double q = key.eta - k * t;
  return k * k + q * q;
}

double symbol_dtp(double t, const ModeKey& key) {
  require_nonzero_mode(key);
  const double k = key.k;
  return -2.0 * k * (key.eta - k * t);
}

LyapCoeffs lyap_coeffs(double t, const ModeKey& key, const PhysParams& params, Convention conv) {
  const double p = symbol_p(t, key);
  const double k2 = static_cast<double>(key.k) * key.k;
  const double sqrt_p = std::sqrt(p);
  const double b = sqrt_p / params.mach;
  const double acoustic = conv == Convention::derived ? b : 2.0 * b;
  return {symbol_dtp(t, key) / (4.0 * p), b, acoustic + 2.0 * params.mach * k2 / (p * sqrt_p)};
}

Mat2 matrix_L(double t, const ModeKey& key, const PhysParams& params, Convention conv) {
  const LyapCoeffs c = lyap_coeffs(t, key, params, conv);
  return {-c.a, -c.b, c.d, c.a};
}

std::array<double, 2> forcing_F(double t, const ModeKey& key, const PhysParams& params) {
  const double p = symbol_p(t, key);
  const double k2 = static_cast<double>(key.k) * key.k;
  return {0.0, -2.0 * k2 / (params.gamma * std::pow(p, 1.75))};
}

WeightedState weight(const UnweightedState& s, double t, const ModeKey& key, const PhysParams& params) {
  const double p = symbol_p(t, key);
  const double p14 = std::sqrt(std::sqrt(p));
  return {s.delta / (params.mach * p14), s.a / (p14 * p14 * p14)};
}

UnweightedState unweight(const WeightedState& z, double t, const ModeKey& key, const PhysParams& params) {
  const double p = symbol_p(t, key);
  const double p14 = std::sqrt(std::sqrt(p));
  return {z.z1 * (params.mach * p14), z.z2 * (p14 * p14 * p14)};
}

double lyap_diagonal(const WeightedState& z, const LyapCoeffs& c) {
  const double r = std::sqrt(c.d / c.b);
  return r * std::norm(z.z1) + std::norm(z.z2) / r;
}

double lyap_energy(const WeightedState& z, const LyapCoeffs& c) {
  const double cross = (z.z1 * std::conj(z.z2)).real();
  return lyap_diagonal(z, c) + 2.0 * c.a / std::sqrt(c.d * c.b) * cross;
}

}  // namespace couette

#include "couette/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "couette/evolver.hpp"
#include "couette/fd_oracle.hpp"
#include "couette/symbols.hpp"
#include "couette/zero_mode.hpp"

namespace couette {

using json = nlohmann::ordered_json;

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (n == 0) return;
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> sample_times(double t_end, double sample_dt) {
  if (!(t_end > 0.0) || !(sample_dt > 0.0)) throw std::invalid_argument("t_end and sample_dt must be > 0");
  std::vector<double> ts;
  const double snap = 1e-9 * std::max(1.0, t_end);
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * sample_dt;
    if (t >= t_end - snap) break;
    ts.push_back(t);
  }
  ts.push_back(t_end);
  return ts;
}

namespace {

std::vector<double> positive_ks(const SpectralField& f) {
  std::vector<double> out;
  for (int k : f.k_list()) {
    if (k > 0) out.push_back(k);
  }
  return out;
}

std::vector<double> grid_etas(const EtaGrid& g) {
  std::vector<double> e(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) e[j] = g[j];
  return e;
}

std::vector<double> grid_weights(const EtaGrid& g) {
  std::vector<double> w(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) w[j] = g.weight(j);
  return w;
}

// Mirror the k > 0 row into -k using Hermitian symmetry.
void mirror_row(SpectralField& f, int k) {
  const std::size_t kp = f.k_index(k);
  const std::size_t km = f.k_index(-k);
  const EtaGrid& g = f.grid();
  for (std::size_t j = 0; j < g.size(); ++j) f.at(km, g.mirror(j)) = std::conj(f.at(kp, j));
}

}  // namespace

SpectralState evolve_spectral(const InitialFields& in, const PhysParams& params, double t, const StepPolicy& policy,
                              const kernels::KernelTable& table) {
  SpectralState out{t, in.rho, in.alpha, in.omega, in.theta};
  const EtaGrid& g = in.rho.grid();
  const auto etas = grid_etas(g);
  const auto ks = positive_ks(in.rho);
  parallel_for(ks.size(), [&](std::size_t i) {
    const int k = static_cast<int>(ks[i]);
    const std::size_t ki = in.rho.k_index(k);
    FullBatch b(k, etas, params, policy, table);
    for (std::size_t j = 0; j < g.size(); ++j) {
      b.set_state(j, {in.rho.at(ki, j), in.alpha.at(ki, j), in.omega.at(ki, j), in.theta.at(ki, j)});
    }
    if (t > 0.0) b.advance_to(t);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const FullModeState s = b.state(j);
      out.R.at(ki, j) = s.R;
      out.A.at(ki, j) = s.A;
      out.Omega.at(ki, j) = s.Omega;
      out.Theta.at(ki, j) = s.Theta;
    }
  });
  for (double kd : ks) {
    const int k = static_cast<int>(kd);
    mirror_row(out.R, k);
    mirror_row(out.A, k);
    mirror_row(out.Omega, k);
    mirror_row(out.Theta, k);
  }
  return out;
}

InitialFields initial_fields(const RunConfig& cfg) {
  validate_config(cfg);
  const auto ks = cfg.k_list();
  return {make_packet(cfg.initial.rho, cfg.grid, ks), make_packet(cfg.initial.alpha, cfg.grid, ks),
          make_packet(cfg.initial.omega, cfg.grid, ks), make_packet(cfg.initial.theta, cfg.grid, ks)};
}

std::vector<std::string> grid_warnings(const RunConfig& cfg) {
  std::vector<std::string> w;
  double extent = 0.0;
  for (const PacketSpec* p : {&cfg.initial.rho, &cfg.initial.alpha, &cfg.initial.omega, &cfg.initial.theta}) {
    if (p->harmonics.empty()) continue;
    extent = std::max(extent, std::abs(p->center) + 8.0 * p->width);
    if (cfg.grid.eta_max() < 8.0 / p->width) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "eta range %.6g holds fewer than 8 spectral widths of a packet of width %.6g",
                    cfg.grid.eta_max(), p->width);
      w.push_back(buf);
    }
  }
  const double period = 2.0 * kPi / cfg.grid.spacing();
  const double needed = 2.0 * (cfg.t_end / cfg.params.mach + extent);
  if (period < needed) {
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "eta spacing implies a y-period of %.6g, below the %.6g needed for acoustic spreading up to t=%.6g; "
                  "periodic images will pollute the norms (refine n_eta)",
                  period, needed, cfg.t_end);
    w.push_back(buf);
  }
  return w;
}

namespace {

struct KSample {
  kernels::NormSums sums;
  double lyap_min = 1.0;
  double lyap_max = 1.0;
  double beta_drift = 0.0;
  double gamma_drift = 0.0;
  double sigma_drift = 0.0;
};

double initial_scale(const InitialFields& in) {
  double m = 0.0;
  for (const SpectralField* f : {&in.rho, &in.alpha, &in.omega, &in.theta}) {
    for (const cplx& z : f->data()) m = std::max(m, std::abs(z));
  }
  return m;
}

// Tracks E(t)/E(0) over the modes that carry energy initially.
class LyapTracker {
 public:
  LyapTracker(int k, const std::vector<double>& etas, const PhysParams& params, Convention conv)
      : k_(k), etas_(etas), params_(params), conv_(conv), e0_(etas.size(), 0.0) {}

  void start(const std::vector<WeightedState>& z0) {
    double emax = 0.0;
    for (std::size_t j = 0; j < z0.size(); ++j) {
      e0_[j] = lyap_energy(z0[j], lyap_coeffs(0.0, {k_, etas_[j]}, params_, conv_));
      emax = std::max(emax, e0_[j]);
    }
    floor_ = 1e-8 * emax;
  }

  void update(double t, std::size_t j, const WeightedState& z, KSample& s) const {
    if (!(e0_[j] > floor_) || e0_[j] == 0.0) return;
    const double r = lyap_energy(z, lyap_coeffs(t, {k_, etas_[j]}, params_, conv_)) / e0_[j];
    s.lyap_min = std::min(s.lyap_min, r);
    s.lyap_max = std::max(s.lyap_max, r);
  }

 private:
  int k_;
  const std::vector<double>& etas_;
  PhysParams params_;
  Convention conv_;
  std::vector<double> e0_;
  double floor_ = 0.0;
};

std::vector<KSample> run_k_derived(int k, const InitialFields& in, const PhysParams& params, const StepPolicy& policy,
                                   const std::vector<double>& times, double scale, const kernels::KernelTable& table,
                                   std::uint64_t& steps, std::uint64_t& rejected) {
  const EtaGrid& g = in.rho.grid();
  const auto etas = grid_etas(g);
  const auto weights = grid_weights(g);
  const std::size_t ki = in.rho.k_index(k);
  const double gm = params.gamma;
  FullBatch b(k, etas, params, policy, table);
  std::vector<FullModeState> s0(g.size());
  std::vector<WeightedState> z0(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    s0[j] = {in.rho.at(ki, j), in.alpha.at(ki, j), in.omega.at(ki, j), in.theta.at(ki, j)};
    b.set_state(j, s0[j]);
    z0[j] = weight({s0[j].delta(gm), s0[j].A}, 0.0, {k, etas[j]}, params);
  }
  LyapTracker lyap(k, etas, params, Convention::derived);
  lyap.start(z0);
  const double inv_scale = scale > 0.0 ? 1.0 / scale : 0.0;
  std::vector<KSample> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    b.advance_to(t);
    KSample& s = out[i];
    s.sums = b.norm_sums(weights);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const FullModeState st = b.state(j);
      s.beta_drift = std::max(s.beta_drift, std::abs(st.beta() - s0[j].beta()) * inv_scale);
      s.gamma_drift = std::max(s.gamma_drift, std::abs(st.big_gamma(gm) - s0[j].big_gamma(gm)) * inv_scale);
      s.sigma_drift = std::max(s.sigma_drift, std::abs(st.sigma(gm) - s0[j].sigma(gm)) * inv_scale);
      lyap.update(t, j, weight({st.delta(gm), st.A}, t, {k, etas[j]}, params), s);
    }
  }
  steps += b.steps();
  rejected += b.rejected();
  return out;
}

std::vector<KSample> run_k_printed(int k, const InitialFields& in, const Invariants& inv, const PhysParams& params,
                                   const StepPolicy& policy, const std::vector<double>& times,
                                   const kernels::KernelTable& table, std::uint64_t& steps, std::uint64_t& rejected) {
  const EtaGrid& g = in.rho.grid();
  const auto etas = grid_etas(g);
  const auto weights = grid_weights(g);
  const std::size_t ki = in.rho.k_index(k);
  const double gm = params.gamma;
  WeightedBatch b(k, etas, params, policy, Convention::printed, table);
  std::vector<WeightedState> z0(g.size());
  std::vector<cplx> src(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const FullModeState s{in.rho.at(ki, j), in.alpha.at(ki, j), in.omega.at(ki, j), in.theta.at(ki, j)};
    src[j] = inv.beta_in.at(ki, j) + inv.gamma_in.at(ki, j);
    z0[j] = weight({s.delta(gm), s.A}, 0.0, {k, etas[j]}, params);
    b.set_state(j, z0[j], src[j]);
  }
  LyapTracker lyap(k, etas, params, Convention::printed);
  lyap.start(z0);
  const std::size_t n = g.size();
  const std::size_t lanes = kernels::padded(2 * n);
  std::vector<double> eta_l(lanes, 0.0), w_l(lanes, 0.0);
  std::vector<double> planes[4];
  for (auto& p : planes) p.assign(lanes, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    eta_l[j] = eta_l[n + j] = etas[j];
    w_l[j] = w_l[n + j] = weights[j];
  }
  std::vector<KSample> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    b.advance_to(t);
    KSample& s = out[i];
    for (std::size_t j = 0; j < n; ++j) {
      const WeightedState z = b.state(j);
      lyap.update(t, j, z, s);
      const UnweightedState u = unweight(z, t, {k, etas[j]}, params);
      const cplx omega = src[j] / gm - u.delta;
      const cplx R = inv.beta_in.at(ki, j) - omega;
      const cplx Th = inv.gamma_in.at(ki, j) - (gm - 1.0) * omega;
      const cplx v[4] = {R, u.a, omega, Th};
      for (int c = 0; c < 4; ++c) {
        planes[c][j] = v[c].real();
        planes[c][n + j] = v[c].imag();
      }
    }
    kernels::NormArgs args;
    args.k = k;
    args.gamma = gm;
    args.t = t;
    args.n = lanes;
    args.eta = eta_l.data();
    args.weight = w_l.data();
    for (int c = 0; c < 4; ++c) args.in[c] = planes[c].data();
    s.sums = table.norm_sums(args);
  }
  steps += b.steps();
  rejected += b.rejected();
  return out;
}

NormSample combine(double t, const std::vector<const KSample*>& parts, const PhysParams& params) {
  kernels::NormSums tot;
  NormSample s;
  s.t = t;
  for (const KSample* p : parts) {
    tot += p->sums;
    s.lyap_min = std::min(s.lyap_min, p->lyap_min);
    s.lyap_max = std::max(s.lyap_max, p->lyap_max);
    s.beta_drift = std::max(s.beta_drift, p->beta_drift);
    s.gamma_drift = std::max(s.gamma_drift, p->gamma_drift);
    s.sigma_drift = std::max(s.sigma_drift, p->sigma_drift);
  }
  // Only k > 0 rows are evolved; the -k rows carry the same mass.
  tot *= 2.0;
  const double gm = params.gamma;
  const double M = params.mach;
  s.pvx = std::sqrt(tot.pvx);
  s.pvy = std::sqrt(tot.pvy);
  s.qv = std::sqrt(tot.qv);
  s.rho_scaled = gm / M * std::sqrt(tot.rho);
  s.theta_scaled = gm / M * std::sqrt(tot.theta);
  s.sigma_l2 = std::sqrt(tot.sigma) / M;
  const double rho_split = std::sqrt(tot.rho_sum) / M;
  const double theta_split = std::sqrt(tot.theta_sum) / M;
  auto defect = [](double a, double b) {
    const double m = std::max(a, b);
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
  };
  s.rho_split_defect = defect(rho_split, s.rho_scaled);
  s.theta_split_defect = defect(theta_split, s.theta_scaled);
  return s;
}

}  // namespace

SimulationResult simulate(const RunConfig& cfg, Convention conv, const kernels::KernelTable& table) {
  validate_config(cfg);
  SimulationResult r{conv, initial_fields(cfg), {}, 0, 0, {}, {}};
  r.isa = kernels::to_string(table.isa);
  r.warnings = grid_warnings(cfg);
  const Invariants inv = invariants_from_initial(r.initial, cfg.params);
  const auto times = sample_times(cfg.t_end, cfg.sample_dt);
  const double scale = initial_scale(r.initial);
  std::vector<int> ks(cfg.k_set.begin(), cfg.k_set.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<std::vector<KSample>> per_k(ks.size());
  std::vector<std::uint64_t> steps(ks.size(), 0), rejected(ks.size(), 0);
  parallel_for(ks.size(), [&](std::size_t i) {
    per_k[i] = conv == Convention::derived
                   ? run_k_derived(ks[i], r.initial, cfg.params, cfg.policy, times, scale, table, steps[i], rejected[i])
                   : run_k_printed(ks[i], r.initial, inv, cfg.params, cfg.policy, times, table, steps[i], rejected[i]);
  });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    r.steps += steps[i];
    r.rejected += rejected[i];
  }
  r.series.samples.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<const KSample*> parts;
    for (const auto& v : per_k) parts.push_back(&v[i]);
    r.series.samples.push_back(combine(times[i], parts, cfg.params));
  }
  return r;
}

FitSet fit_rates(const NormSeries& series, double t_end) {
  const auto t = series.times();
  const double lo = 0.1 * t_end;
  return {fit_power_law(t, series.column(&NormSample::pvx), lo, t_end),
          fit_power_law(t, series.column(&NormSample::pvy), lo, t_end),
          fit_power_law(t, series.compressible(), lo, t_end)};
}

std::vector<InvariantCheck> invariant_checks(const SimulationResult& r) {
  double beta = 0.0, gam = 0.0, sig = 0.0, rho_split = 0.0, theta_split = 0.0, sigma_var = 0.0;
  bool finite = true;
  const double sigma0 = r.series.samples.empty() ? 0.0 : r.series.samples.front().sigma_l2;
  for (const auto& s : r.series.samples) {
    beta = std::max(beta, s.beta_drift);
    gam = std::max(gam, s.gamma_drift);
    sig = std::max(sig, s.sigma_drift);
    rho_split = std::max(rho_split, s.rho_split_defect);
    theta_split = std::max(theta_split, s.theta_split_defect);
    const double d = std::abs(s.sigma_l2 - sigma0);
    sigma_var = std::max(sigma_var, sigma0 > 0.0 ? d / sigma0 : d);
    for (double v : {s.pvx, s.pvy, s.qv, s.rho_scaled, s.theta_scaled, s.lyap_min, s.lyap_max}) {
      finite = finite && std::isfinite(v);
    }
  }
  auto check = [](const char* name, double v, double lim) { return InvariantCheck{name, v, lim, v < lim}; };
  return {check("beta_transport", beta, 1e-10),
          check("gamma_transport", gam, 1e-10),
          check("sigma_transport", sig, 1e-10),
          check("sigma_norm_constancy", sigma_var, 1e-8),
          check("rho_separation_identity", rho_split, 1e-10),
          check("theta_separation_identity", theta_split, 1e-10),
          {"finite_norms", finite ? 0.0 : 1.0, 0.5, finite}};
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string num_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string norms_csv(const NormSeries& series) {
  std::string out =
      "t,pvx_l2,pvy_l2,qv_l2,rho_l2_scaled,theta_l2_scaled,lyap_ratio_min,lyap_ratio_max,beta_drift,gamma_drift,"
      "sigma_drift\n";
  for (const auto& s : series.samples) {
    const double row[] = {s.t,        s.pvx,      s.pvy,         s.qv,          s.rho_scaled, s.theta_scaled,
                          s.lyap_min, s.lyap_max, s.beta_drift,  s.gamma_drift, s.sigma_drift};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      out += fmt(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

namespace {

json fit_json(const PowerFit& f) {
  return {{"exponent", f.exponent}, {"residual", f.residual}, {"samples", f.samples}, {"window", {f.t_lo, f.t_hi}}};
}

struct RunSummary {
  json j;
  bool invariants_ok = true;
};

RunSummary summarize(const RunConfig& cfg, const SimulationResult& r) {
  RunSummary out;
  json& j = out.j;
  j["convention"] = to_string(r.convention);
  j["simd"] = r.isa;
  j["steps"] = r.steps;
  j["rejected_steps"] = r.rejected;
  j["warnings"] = r.warnings;

  const bool zero = r.series.samples.empty() ||
                    std::all_of(r.series.samples.begin(), r.series.samples.end(),
                                [](const NormSample& s) { return s.pvx == 0.0 && s.pvy == 0.0 && s.compressible() == 0.0; });
  std::optional<FitSet> fits;
  if (zero) {
    j["fits"] = nullptr;
  } else {
    try {
      fits = fit_rates(r.series, cfg.t_end);
      j["fits"] = {{"pvx", fit_json(fits->pvx)},
                   {"pvy", fit_json(fits->pvy)},
                   {"compressible", fit_json(fits->compressible)}};
    } catch (const std::exception& e) {
      j["fits"] = {{"error", e.what()}};
    }
  }

  const DataNorms dn = data_norms(r.initial, cfg.params);
  const BoundReport br = theorem_bound_report(r.series, dn, cfg.params);
  j["theorem_constants"] = {{"pvx", {{"ratio", br.pvx}, {"at", br.pvx_at}}},
                            {"pvy", {{"ratio", br.pvy}, {"at", br.pvy_at}}},
                            {"compressible", {{"ratio", br.compressible}, {"at", br.compressible_at}}}};

  json inv = json::array();
  for (const auto& c : invariant_checks(r)) {
    inv.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    out.invariants_ok = out.invariants_ok && c.pass;
  }
  j["invariants"] = inv;

  json acc;
  double transport = 0.0, sigma_var = 0.0;
  const double sigma0 = r.series.samples.front().sigma_l2;
  for (const auto& s : r.series.samples) {
    transport = std::max({transport, s.beta_drift, s.gamma_drift});
    const double d = std::abs(s.sigma_l2 - sigma0);
    sigma_var = std::max(sigma_var, sigma0 > 0.0 ? d / sigma0 : d);
  }
  acc["invariant_transport"] = {{"value", transport}, {"limit", 1e-10}, {"pass", transport < 1e-10}};
  if (fits) {
    const bool rates_ok = fits->pvx.exponent <= -0.45 && fits->pvy.exponent <= -1.35 &&
                          fits->compressible.exponent >= 0.35 && fits->compressible.exponent <= 0.55 &&
                          fits->pvx.residual < 0.1 && fits->pvy.residual < 0.1 && fits->compressible.residual < 0.1;
    acc["rates"] = {{"pvx", fits->pvx.exponent},
                    {"pvy", fits->pvy.exponent},
                    {"compressible", fits->compressible.exponent},
                    {"pass", rates_ok}};
  }
  acc["sigma_conservation"] = {{"value", sigma_var}, {"limit", 1e-8}, {"pass", sigma_var < 1e-8}};
  j["acceptance"] = acc;
  return out;
}

json config_json(const RunConfig& cfg) {
  return {{"gamma", cfg.params.gamma},     {"mach", cfg.params.mach},       {"eta_min", cfg.grid.eta_min()},
          {"eta_max", cfg.grid.eta_max()}, {"n_eta", cfg.grid.size()},      {"k_set", cfg.k_set},
          {"t_end", cfg.t_end},            {"sample_dt", cfg.sample_dt},   {"base_dt", cfg.policy.base_dt},
          {"c_osc", cfg.policy.c_osc},     {"tol", cfg.policy.tol},         {"convention", to_string(cfg.convention)},
          {"seed", cfg.seed}};
}

json duhamel_json(const RunConfig& cfg) {
  json arr = json::array();
  for (int k : cfg.k_set) {
    for (double eta : {0.0, cfg.grid.eta_max()}) {
      const DuhamelBound d = duhamel_bound_check({k, eta}, cfg.params);
      arr.push_back({{"k", k}, {"eta", eta}, {"value", d.value}, {"bound", d.bound}, {"margin", d.bound - d.value},
                     {"within", d.within}});
    }
  }
  return arr;
}

std::string path_in(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

RunOutcome run_config(const RunConfig& cfg) {
  validate_config(cfg);
  RunOutcome out;
  out.out_dir = cfg.out_dir;
  out.primary = simulate(cfg, Convention::derived);
  for (const auto& w : out.primary->warnings) out.messages.push_back("warning: " + w);
  RunSummary main = summarize(cfg, *out.primary);

  json report;
  report["config"] = config_json(cfg);
  report["run"] = main.j;
  report["duhamel"] = duhamel_json(cfg);
  report["oracle"] = nullptr;
  bool ok = main.invariants_ok;
  write_atomic(path_in(cfg.out_dir, "norms.csv"), norms_csv(out.primary->series));
  if (cfg.convention == Convention::printed) {
    const SimulationResult printed = simulate(cfg, Convention::printed);
    RunSummary alt = summarize(cfg, printed);
    report["printed"] = alt.j;
    ok = ok && alt.invariants_ok;
    write_atomic(path_in(cfg.out_dir, "norms_printed.csv"), norms_csv(printed.series));
  }
  report["status"] = ok ? "pass" : "fail";
  write_atomic(path_in(cfg.out_dir, "report.json"), report.dump(2) + "\n");
  if (!main.invariants_ok) {
    for (const auto& c : invariant_checks(*out.primary)) {
      if (!c.pass) out.messages.push_back("invariant failed: " + c.name + " = " + fmt(c.value) + " (limit " + fmt(c.limit) + ")");
    }
  }
  out.ok = ok;
  return out;
}

RunOutcome run_sweep(const RunConfig& cfg) {
  validate_config(cfg);
  const std::vector<double> gammas = cfg.sweep.gamma.empty() ? std::vector<double>{cfg.params.gamma} : cfg.sweep.gamma;
  const std::vector<double> machs = cfg.sweep.mach.empty() ? std::vector<double>{cfg.params.mach} : cfg.sweep.mach;
  std::vector<RunConfig> points;
  for (double g : gammas) {
    for (double m : machs) {
      RunConfig c = cfg;
      c.params = {g, m};
      points.push_back(c);
    }
  }
  struct Row {
    FitSet fits;
    BoundReport bounds;
    bool fit_ok = false;
    bool inv_ok = false;
    std::vector<std::string> warnings;
  };
  std::vector<Row> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const SimulationResult r = simulate(points[i], Convention::derived);
    rows[i].warnings = r.warnings;
    rows[i].bounds = theorem_bound_report(r.series, data_norms(r.initial, points[i].params), points[i].params);
    try {
      rows[i].fits = fit_rates(r.series, points[i].t_end);
      rows[i].fit_ok = true;
    } catch (const std::invalid_argument&) {
      rows[i].fit_ok = false;
    }
    rows[i].inv_ok = true;
    for (const auto& c : invariant_checks(r)) rows[i].inv_ok = rows[i].inv_ok && c.pass;
  });
  std::string csv =
      "gamma,mach,pvx_exponent,pvy_exponent,compressible_exponent,pvx_constant,pvy_constant,compressible_constant,"
      "invariants_ok\n";
  json arr = json::array();
  RunOutcome out;
  out.out_dir = cfg.out_dir;
  out.ok = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Row& r = rows[i];
    const double nan = std::nan("");
    const double e1 = r.fit_ok ? r.fits.pvx.exponent : nan;
    const double e2 = r.fit_ok ? r.fits.pvy.exponent : nan;
    const double e3 = r.fit_ok ? r.fits.compressible.exponent : nan;
    csv += fmt(points[i].params.gamma) + "," + fmt(points[i].params.mach) + "," + fmt(e1) + "," + fmt(e2) + "," +
           fmt(e3) + "," + fmt(r.bounds.pvx) + "," + fmt(r.bounds.pvy) + "," + fmt(r.bounds.compressible) + "," +
           (r.inv_ok ? "1" : "0") + "\n";
    json row = {{"gamma", points[i].params.gamma}, {"mach", points[i].params.mach},
                {"theorem_constants", {{"pvx", r.bounds.pvx}, {"pvy", r.bounds.pvy}, {"compressible", r.bounds.compressible}}},
                {"invariants_ok", r.inv_ok}, {"warnings", r.warnings}};
    if (r.fit_ok) {
      row["fits"] = {{"pvx", fit_json(r.fits.pvx)}, {"pvy", fit_json(r.fits.pvy)}, {"compressible", fit_json(r.fits.compressible)}};
    } else {
      row["fits"] = nullptr;
    }
    arr.push_back(row);
    out.ok = out.ok && r.inv_ok;
    for (const auto& w : r.warnings) out.messages.push_back("warning (gamma=" + num_short(points[i].params.gamma) + ", mach=" + num_short(points[i].params.mach) + "): " + w);
  }
  write_atomic(path_in(cfg.out_dir, "sweep.csv"), csv);
  write_atomic(path_in(cfg.out_dir, "sweep.json"),
               json{{"config", config_json(cfg)}, {"points", arr}, {"status", out.ok ? "pass" : "fail"}}.dump(2) + "\n");
  return out;
}

RunOutcome run_rates(const RunConfig& cfg, std::size_t samples) {
  validate_config(cfg);
  if (samples == 0) throw std::invalid_argument("rates needs at least one sample");
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * unit_from_bits(rng()); };
  std::vector<RunConfig> runs;
  for (std::size_t i = 0; i < samples; ++i) {
    RunConfig c = cfg;
    for (PacketSpec* p : {&c.initial.rho, &c.initial.alpha, &c.initial.omega, &c.initial.theta}) {
      p->harmonics.clear();
      for (int k : c.k_set) p->harmonics.push_back({k, cplx(uniform(-1.0, 1.0), uniform(-1.0, 1.0))});
      p->amplitude = 1.0;
      // Width and center stay within what the configured η grid resolves.
      p->width = std::max(8.0 / c.grid.eta_max(), cfg.initial.rho.width * uniform(0.9, 1.1));
      p->center = uniform(-3.0, 3.0);
    }
    runs.push_back(c);
  }
  std::vector<FitSet> fits(samples);
  std::vector<char> ok(samples, 0);
  std::vector<std::string> errors(samples);
  parallel_for(samples, [&](std::size_t i) {
    const SimulationResult r = simulate(runs[i], Convention::derived);
    try {
      fits[i] = fit_rates(r.series, runs[i].t_end);
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::string csv = "sample,pvx_exponent,pvy_exponent,compressible_exponent,compressible_residual\n";
  json arr = json::array();
  std::vector<double> growth;
  for (std::size_t i = 0; i < samples; ++i) {
    if (!ok[i]) {
      arr.push_back({{"sample", i}, {"error", errors[i]}});
      continue;
    }
    growth.push_back(fits[i].compressible.exponent);
    csv += std::to_string(i) + "," + fmt(fits[i].pvx.exponent) + "," + fmt(fits[i].pvy.exponent) + "," +
           fmt(fits[i].compressible.exponent) + "," + fmt(fits[i].compressible.residual) + "\n";
    arr.push_back({{"sample", i},
                   {"pvx", fit_json(fits[i].pvx)},
                   {"pvy", fit_json(fits[i].pvy)},
                   {"compressible", fit_json(fits[i].compressible)}});
  }
  json summary = nullptr;
  if (!growth.empty()) {
    std::sort(growth.begin(), growth.end());
    double mean = 0.0;
    for (double g : growth) mean += g;
    mean /= static_cast<double>(growth.size());
    summary = {{"min", growth.front()}, {"median", growth[growth.size() / 2]}, {"max", growth.back()}, {"mean", mean}};
  }
  write_atomic(path_in(cfg.out_dir, "rates.csv"), csv);
  write_atomic(path_in(cfg.out_dir, "rates.json"),
               json{{"config", config_json(cfg)}, {"samples", arr}, {"growth_exponent", summary}}.dump(2) + "\n");
  RunOutcome out;
  out.out_dir = cfg.out_dir;
  out.ok = growth.size() == samples;
  return out;
}

ZeroModeCheck zero_mode_check(const PhysParams& params, double t, std::size_t n) {
  validate_params(params);
  const double w = 4.0;
  const double c0 = 0.5;
  const double half = std::abs(c0) + t / params.mach + 8.0 * w;
  auto gauss = [](double y, double c, double width) {
    const double z = (y - c) / width;
    return std::exp(-0.5 * z * z);
  };
  const ZeroModeState s0 = make_zero_mode_state(
      half, n, [&](double y) { return gauss(y, c0, w); }, [&](double y) { return 0.3 * gauss(y, -c0, w); },
      [&](double y) { return 0.5 * gauss(y, 0.0, w); }, [&](double y) { return -0.7 * gauss(y, c0, w); });
  const double dt = 0.25 * params.mach * s0.spacing();
  const double e0 = zero_mode_wave_energy(s0, params);
  double drift = 0.0;
  ZeroModeOptions opts;
  opts.observer = [&](double, const ZeroModeState& s) {
    drift = std::max(drift, std::abs(zero_mode_wave_energy(s, params) - e0) / e0);
  };
  const ZeroModeState s1 = evolve_zero_mode(s0, params, t, dt, opts);
  const auto ref = dalembert_reference(s0, params, t);
  const auto sum = s1.sum_rho_theta();
  ZeroModeCheck out;
  out.mach = params.mach;
  for (std::size_t i = 0; i < sum.size(); ++i) out.max_error = std::max(out.max_error, std::abs(sum[i] - ref[i]));
  out.energy_drift = drift;

  // α₀ obeys the same wave equation with α_t(0) = -(1/(γM²)) ∂_yy(ρ₀+θ₀)ⁱⁿ.
  const auto u0 = s0.sum_rho_theta();
  const double h = s0.spacing();
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    g[i] = -(u0[i - 1] - 2.0 * u0[i] + u0[i + 1]) / (h * h) / (params.gamma * params.mach * params.mach);
  }
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = s0.y(i);
  const auto aref = dalembert(s0.alpha, g, s0.half_width, 1.0 / params.mach, t, ys);
  for (std::size_t i = 0; i < n; ++i) out.alpha_error = std::max(out.alpha_error, std::abs(s1.alpha[i] - aref[i]));
  return out;
}

RunOutcome run_zero_mode(const RunConfig& cfg) {
  validate_config(cfg);
  const std::vector<double> machs = cfg.sweep.mach.empty() ? std::vector<double>{0.5, 1.0, 2.0} : cfg.sweep.mach;
  std::vector<ZeroModeCheck> res(machs.size());
  parallel_for(machs.size(), [&](std::size_t i) { res[i] = zero_mode_check({cfg.params.gamma, machs[i]}, 2.0, 4096); });
  RunOutcome out;
  out.out_dir = cfg.out_dir;
  out.ok = true;
  json arr = json::array();
  for (const auto& r : res) {
    const bool pass = r.max_error < 1e-6 && r.energy_drift < 1e-6;
    out.ok = out.ok && pass;
    arr.push_back({{"mach", r.mach}, {"max_error", r.max_error}, {"energy_drift", r.energy_drift},
                   {"alpha_error", r.alpha_error}, {"pass", pass}});
  }
  write_atomic(path_in(cfg.out_dir, "zero_mode.json"),
               json{{"gamma", cfg.params.gamma}, {"t", 2.0}, {"n", 4096}, {"checks", arr}}.dump(2) + "\n");
  return out;
}

std::vector<OracleLevel> oracle_study(const PhysParams& params, int k, double t, std::size_t levels) {
  validate_params(params);
  if (k <= 0) throw std::invalid_argument("oracle study needs k > 0");
  InitialDataSpec spec;
  spec.rho = {{{k, cplx(1.0, 0.2)}}, 0.3, 1.0, 1.0};
  spec.alpha = {{{k, cplx(-0.4, 0.5)}}, -0.2, 1.0, 1.0};
  spec.omega = {{{k, cplx(0.6, -0.3)}}, 0.1, 1.0, 1.0};
  spec.theta = {{{k, cplx(0.2, 0.8)}}, -0.4, 1.0, 1.0};
  const double L = 32.0;
  const double eta_max = 12.0 + std::abs(static_cast<double>(k)) * t;
  StepPolicy policy;
  policy.c_osc = 0.02;
  policy.tol = 0.0;
  std::vector<OracleLevel> out;
  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    const std::size_t scale = std::size_t{1} << lvl;
    OracleLevel o;
    o.fd_points = 2048 * scale + 1;
    o.eta_points = 400 * scale + 1;
    const EtaGrid grid(-eta_max, eta_max, o.eta_points);
    const InitialFields in = make_packet(spec, grid);
    const SpectralState sp = evolve_spectral(in, params, t, policy);
    const YGrid yg{L, o.fd_points};
    const FdState s0 = make_fd_state(spec, k, yg);
    o.dt = fd_max_dt(s0, params);
    const FdState s1 = evolve_fd(s0, params, t, o.dt);
    o.discrepancy = compare_with_spectral(s1, sp.R, sp.A, sp.Omega, sp.Theta);
    out.push_back(o);
  }
  return out;
}

RunOutcome run_oracle(const RunConfig& cfg) {
  validate_config(cfg);
  RunOutcome out;
  out.out_dir = cfg.out_dir;
  out.ok = true;
  json arr = json::array();
  for (int k : cfg.k_set) {
    const auto levels = oracle_study(cfg.params, k, 1.0, 2);
    json lv = json::array();
    bool monotone = true;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& d = levels[i].discrepancy;
      lv.push_back({{"fd_points", levels[i].fd_points}, {"eta_points", levels[i].eta_points}, {"dt", levels[i].dt},
                    {"rho", d.rho}, {"alpha", d.alpha}, {"omega", d.omega}, {"theta", d.theta}});
      if (i > 0) {
        const auto& p = levels[i - 1].discrepancy;
        monotone = monotone && d.rho < p.rho && d.alpha < p.alpha && d.omega < p.omega && d.theta < p.theta;
      }
    }
    const bool pass = levels.front().discrepancy.max() < 1e-3 && monotone;
    out.ok = out.ok && pass;
    arr.push_back({{"k", k}, {"t", 1.0}, {"levels", lv}, {"monotone", monotone}, {"pass", pass}});
  }
  write_atomic(path_in(cfg.out_dir, "oracle.json"),
               json{{"gamma", cfg.params.gamma}, {"mach", cfg.params.mach}, {"runs", arr}}.dump(2) + "\n");
  return out;
}

RunOutcome run_duhamel(const RunConfig& cfg) {
  validate_config(cfg);
  RunOutcome out;
  out.out_dir = cfg.out_dir;
  out.ok = true;
  std::string csv = "k,eta,gamma,value,bound,half_line_closed_form,within\n";
  json arr = json::array();
  const double ref = forcing_reference_constant();
  for (int k : {1, 2, 3}) {
    for (double eta : {0.0, 1.0, 10.0}) {
      for (double g : {1.4, 2.0}) {
        const DuhamelBound d = duhamel_bound_check({k, eta}, {g, cfg.params.mach});
        out.ok = out.ok && d.within;
        csv += std::to_string(k) + "," + fmt(eta) + "," + fmt(g) + "," + fmt(d.value) + "," + fmt(d.bound) + "," +
               fmt(d.closed_form) + "," + (d.within ? "1" : "0") + "\n";
        arr.push_back({{"k", k}, {"eta", eta}, {"gamma", g}, {"value", d.value}, {"bound", d.bound},
                       {"half_line_closed_form", d.closed_form}, {"within", d.within}});
      }
    }
  }
  write_atomic(path_in(cfg.out_dir, "duhamel.csv"), csv);
  write_atomic(path_in(cfg.out_dir, "duhamel.json"),
               json{{"reference_constant", ref}, {"reference_closed_form", forcing_reference_closed_form()},
                    {"table", arr}, {"status", out.ok ? "pass" : "fail"}}
                       .dump(2) + "\n");
  if (!out.ok) out.messages.push_back("forcing integral exceeds the reference constant for some (k, eta); see duhamel.csv");
  return out;
}

}  // namespace couette

#include "couette/config.hpp"

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace couette {

std::vector<int> RunConfig::k_list() const {
  std::vector<int> ks;
  for (int k : k_set) {
    ks.push_back(k);
    ks.push_back(-k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

void validate_config(const RunConfig& cfg) {
  validate_params(cfg.params);
  validate_policy(cfg.policy);
  if (cfg.k_set.empty()) throw std::invalid_argument("k_set must not be empty");
  for (int k : cfg.k_set) {
    if (k <= 0) throw std::invalid_argument("k_set entries must be positive integers");
  }
  std::set<int> ks(cfg.k_set.begin(), cfg.k_set.end());
  for (const PacketSpec* p : {&cfg.initial.rho, &cfg.initial.alpha, &cfg.initial.omega, &cfg.initial.theta}) {
    if (!(p->width > 0.0)) throw std::invalid_argument("packet width must be > 0");
    for (const auto& h : p->harmonics) {
      if (h.k == 0) throw std::invalid_argument("initial data harmonics must have k != 0 (zero x-mean)");
      if (!ks.count(std::abs(h.k))) {
        throw std::invalid_argument("harmonic k=" + std::to_string(h.k) + " is not in k_set");
      }
    }
  }
  if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (!(cfg.sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be > 0");
  for (double g : cfg.sweep.gamma) validate_params({g, 1.0});
  for (double m : cfg.sweep.mach) validate_params({1.4, m});
  if (cfg.out_dir.empty()) throw std::invalid_argument("out_dir must not be empty");
}

namespace {

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"params", {"gamma", "mach"}},
      {"grid", {"eta_min", "eta_max", "n_eta", "k_set"}},
      {"run", {"t_end", "sample_dt", "base_dt", "c_osc", "tol", "convention", "out_dir", "seed"}},
      {"sweep", {"gamma", "mach"}},
      {"initial.rho", {"harmonics", "center", "width", "amplitude"}},
      {"initial.alpha", {"harmonics", "center", "width", "amplitude"}},
      {"initial.omega", {"harmonics", "center", "width", "amplitude"}},
      {"initial.theta", {"harmonics", "center", "width", "amplitude"}},
  };
  return keys;
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("[" + section + "] " + key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument("[" + section + "] " + key + ": expected an integer, got '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  boost::split(parts, v, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::vector<Harmonic> parse_harmonics(const std::string& section, const std::string& v) {
  std::vector<Harmonic> out;
  for (const auto& item : split_list(v)) {
    std::vector<std::string> f;
    boost::split(f, item, boost::is_any_of(":"));
    for (auto& s : f) boost::trim(s);
    if (f.size() != 3) {
      throw std::invalid_argument("[" + section + "] harmonics: expected k:re:im, got '" + item + "'");
    }
    const long long k = to_int(section, "harmonics", f[0]);
    out.push_back({static_cast<int>(k), cplx(to_double(section, "harmonics", f[1]), to_double(section, "harmonics", f[2]))});
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  std::map<std::string, std::map<std::string, std::string>> sec;
  for (const auto& [name, body] : tree) {
    if (!body.data().empty()) throw std::invalid_argument("config key '" + name + "' outside any section");
    const auto it = allowed_keys().find(name);
    if (it == allowed_keys().end()) throw std::invalid_argument("unknown config section [" + name + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw std::invalid_argument("unknown key '" + key + "' in [" + name + "]");
      sec[name][key] = boost::trim_copy(value.data());
    }
  }
  auto get = [&](const std::string& s, const std::string& k) -> const std::string* {
    const auto a = sec.find(s);
    if (a == sec.end()) return nullptr;
    const auto b = a->second.find(k);
    return b == a->second.end() ? nullptr : &b->second;
  };

  RunConfig cfg;
  if (auto v = get("params", "gamma")) cfg.params.gamma = to_double("params", "gamma", *v);
  if (auto v = get("params", "mach")) cfg.params.mach = to_double("params", "mach", *v);

  double eta_min = cfg.grid.eta_min(), eta_max = cfg.grid.eta_max();
  long long n_eta = static_cast<long long>(cfg.grid.size());
  if (auto v = get("grid", "eta_min")) eta_min = to_double("grid", "eta_min", *v);
  if (auto v = get("grid", "eta_max")) eta_max = to_double("grid", "eta_max", *v);
  if (auto v = get("grid", "n_eta")) n_eta = to_int("grid", "n_eta", *v);
  if (n_eta < 2) throw std::invalid_argument("[grid] n_eta must be >= 2");
  cfg.grid = EtaGrid(eta_min, eta_max, static_cast<std::size_t>(n_eta));
  if (auto v = get("grid", "k_set")) {
    cfg.k_set.clear();
    for (const auto& s : split_list(*v)) cfg.k_set.push_back(static_cast<int>(to_int("grid", "k_set", s)));
  }

  if (auto v = get("run", "t_end")) cfg.t_end = to_double("run", "t_end", *v);
  if (auto v = get("run", "sample_dt")) cfg.sample_dt = to_double("run", "sample_dt", *v);
  if (auto v = get("run", "base_dt")) cfg.policy.base_dt = to_double("run", "base_dt", *v);
  if (auto v = get("run", "c_osc")) cfg.policy.c_osc = to_double("run", "c_osc", *v);
  if (auto v = get("run", "tol")) cfg.policy.tol = to_double("run", "tol", *v);
  if (auto v = get("run", "convention")) cfg.convention = convention_from_string(*v);
  if (auto v = get("run", "out_dir")) cfg.out_dir = *v;
  if (auto v = get("run", "seed")) {
    const long long s = to_int("run", "seed", *v);
    if (s < 0) throw std::invalid_argument("[run] seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  if (auto v = get("sweep", "gamma")) {
    for (const auto& s : split_list(*v)) cfg.sweep.gamma.push_back(to_double("sweep", "gamma", s));
  }
  if (auto v = get("sweep", "mach")) {
    for (const auto& s : split_list(*v)) cfg.sweep.mach.push_back(to_double("sweep", "mach", s));
  }

  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&rng] { return 2.0 * unit_from_bits(rng()) - 1.0; };
  const std::pair<const char*, PacketSpec*> fields[] = {{"initial.rho", &cfg.initial.rho},
                                                        {"initial.alpha", &cfg.initial.alpha},
                                                        {"initial.omega", &cfg.initial.omega},
                                                        {"initial.theta", &cfg.initial.theta}};
  for (const auto& [name, spec] : fields) {
    if (!sec.count(name)) continue;
    if (auto v = get(name, "center")) spec->center = to_double(name, "center", *v);
    if (auto v = get(name, "width")) spec->width = to_double(name, "width", *v);
    if (auto v = get(name, "amplitude")) spec->amplitude = to_double(name, "amplitude", *v);
    if (auto v = get(name, "harmonics")) {
      spec->harmonics = parse_harmonics(name, *v);
    } else {
      for (int k : cfg.k_set) {
        const double re = uniform();
        const double im = uniform();
        spec->harmonics.push_back({k, cplx(re, im)});
      }
    }
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[params]\ngamma = " << num(cfg.params.gamma) << "\nmach = " << num(cfg.params.mach) << "\n\n";
  o << "[grid]\neta_min = " << num(cfg.grid.eta_min()) << "\neta_max = " << num(cfg.grid.eta_max())
    << "\nn_eta = " << cfg.grid.size() << "\nk_set = ";
  for (std::size_t i = 0; i < cfg.k_set.size(); ++i) o << (i ? ", " : "") << cfg.k_set[i];
  o << "\n\n";
  const std::pair<const char*, const PacketSpec*> fields[] = {{"rho", &cfg.initial.rho},
                                                              {"alpha", &cfg.initial.alpha},
                                                              {"omega", &cfg.initial.omega},
                                                              {"theta", &cfg.initial.theta}};
  for (const auto& [name, p] : fields) {
    o << "[initial." << name << "]\nharmonics = ";
    for (std::size_t i = 0; i < p->harmonics.size(); ++i) {
      const auto& h = p->harmonics[i];
      o << (i ? ", " : "") << h.k << ":" << num(h.amplitude.real()) << ":" << num(h.amplitude.imag());
    }
    o << "\ncenter = " << num(p->center) << "\nwidth = " << num(p->width) << "\namplitude = " << num(p->amplitude)
      << "\n\n";
  }
  o << "[run]\nt_end = " << num(cfg.t_end) << "\nsample_dt = " << num(cfg.sample_dt)
    << "\nbase_dt = " << num(cfg.policy.base_dt) << "\nc_osc = " << num(cfg.policy.c_osc)
    << "\ntol = " << num(cfg.policy.tol) << "\nconvention = " << to_string(cfg.convention)
    << "\nout_dir = " << cfg.out_dir << "\nseed = " << cfg.seed << "\n";
  if (!cfg.sweep.gamma.empty() || !cfg.sweep.mach.empty()) {
    o << "\n[sweep]\n";
    auto list = [&](const char* key, const std::vector<double>& v) {
      if (v.empty()) return;
      o << key << " = ";
      for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << num(v[i]);
      o << "\n";
    };
    list("gamma", cfg.sweep.gamma);
    list("mach", cfg.sweep.mach);
  }
  return o.str();
}

}  // namespace couette

#include "mudecay/config.hpp"

#include "mudecay/digest.hpp"
#include "mudecay/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mudecay {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("expected a number, got '" + t + "'");
  return v;
}

long long parse_int(const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("expected an integer, got '" + t + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("expected true or false, got '" + t + "'");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& text, F f) {
  std::vector<T> out;
  for (const auto& item : split(text)) out.push_back(static_cast<T>(f(item)));
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + f(items[i]);
  return out;
}

std::string to_str(long long v) { return std::to_string(v); }
std::string to_str(bool v) { return v ? "true" : "false"; }

Momentum parse_vec3(const std::string& text) {
  const auto v = parse_list<double>(text, parse_double);
  if (v.size() != 3) throw ConfigError("expected three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

std::string vec3_str(const Momentum& p) { return join(std::vector<double>{p(0), p(1), p(2)}, format_double); }

struct Binding {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

using Schema = std::map<std::string, std::map<std::string, Binding>>;

Binding bind(double& x) {
  return {[&x](const std::string& v) { x = parse_double(v); }, [&x] { return format_double(x); }};
}
Binding bind(int& x) {
  return {[&x](const std::string& v) { x = static_cast<int>(parse_int(v)); }, [&x] { return to_str(static_cast<long long>(x)); }};
}
Binding bind(bool& x) {
  return {[&x](const std::string& v) { x = parse_bool(v); }, [&x] { return to_str(x); }};
}
Binding bind(Momentum& x) {
  return {[&x](const std::string& v) { x = parse_vec3(v); }, [&x] { return vec3_str(x); }};
}

void kernel_section(Schema& s, const std::string& name, KernelSpec& k) {
  auto& sec = s[name];
  sec["family"] = {[&k](const std::string& v) { k.family = kernel_family_from_string(trim(v)); },
                   [&k] { return to_string(k.family); }};
  sec["cutoff"] = bind(k.cutoff);
  sec["width"] = bind(k.width);
  sec["level_cap"] = bind(k.level_cap);
  sec["scale"] = bind(k.scale);
}

void landau_section(Schema& s, const std::string& name, LandauGridSpec& g) {
  auto& sec = s[name];
  sec["n_levels"] = bind(g.n_levels);
  sec["p1_nodes"] = bind(g.p1_nodes);
  sec["p3_nodes"] = bind(g.p3_nodes);
  sec["p_range"] = bind(g.p_range);
  sec["spins"] = {[&g](const std::string& v) { g.spins = parse_list<int>(v, parse_int); },
                  [&g] { return join(g.spins, [](int x) { return std::to_string(x); }); }};
  sec["keep_null_modes"] = bind(g.keep_null_modes);
}

void momentum_section(Schema& s, const std::string& name, MomentumGridSpec& g) {
  auto& sec = s[name];
  sec["nodes"] = {[&g](const std::string& v) {
                    const auto n = parse_list<int>(v, parse_int);
                    if (n.size() != 3) throw ConfigError("nodes needs three integers");
                    std::copy(n.begin(), n.end(), g.nodes.begin());
                  },
                  [&g] { return join(std::vector<int>(g.nodes.begin(), g.nodes.end()), [](int x) { return std::to_string(x); }); }};
  sec["p_range"] = bind(g.p_range);
  sec["center"] = bind(g.center);
}

Schema schema(RunConfig& c) {
  Schema s;
  auto& model = s["model"];
  model["m_e"] = bind(c.model.m_e);
  model["m_mu"] = bind(c.model.m_mu);
  model["eB"] = bind(c.model.eB);
  model["g"] = bind(c.model.g);
  model["g_over_g0"] = {[&c](const std::string& v) {
                          if (trim(v) == "none") c.g_over_g0.reset();
                          else c.g_over_g0 = parse_double(v);
                        },
                        [&c] { return c.g_over_g0 ? format_double(*c.g_over_g0) : std::string("none"); }};
  kernel_section(s, "kernel.F", c.model.spec_F);
  kernel_section(s, "kernel.G", c.model.spec_G);
  landau_section(s, "grid.e", c.model.grid_e);
  landau_section(s, "grid.mu-", c.model.grid_mu_minus);
  landau_section(s, "grid.mu+", c.model.grid_mu_plus);
  momentum_section(s, "grid.nubar-e", c.model.grid_nubar_e);
  momentum_section(s, "grid.nu-mu", c.model.grid_nu_mu);

  auto& quad = s["quadrature"];
  quad["hermite_nodes"] = bind(c.model.tol.hermite_nodes);
  quad["vertex_rel_tol"] = bind(c.model.tol.vertex_rel_tol);
  quad["hermitian_tol"] = bind(c.model.tol.hermitian_tol);
  quad["residual_tol"] = bind(c.model.tol.residual_tol);

  auto& sp = s["spectral"];
  sp["solver"] = {[&c](const std::string& v) {
                      const auto t = trim(v);
                      if (t == "dense") c.spectral.solver = SolverKind::Dense;
                      else if (t == "krylov") c.spectral.solver = SolverKind::Krylov;
                      else throw ConfigError("solver must be dense or krylov, got '" + t + "'");
                    },
                    [&c] { return std::string(c.spectral.solver == SolverKind::Dense ? "dense" : "krylov"); }};
  sp["k_low"] = bind(c.spectral.k_low);
  sp["couplings_over_g0"] = {[&c](const std::string& v) { c.spectral.couplings_over_g0 = parse_list<double>(v, parse_double); },
                               [&c] { return join(c.spectral.couplings_over_g0, format_double); }};

  auto& d = s["decay"];
  auto& f = c.decay.test;
  d["channel"] = {[&f](const std::string& v) { f.channel = decay_channel_from_string(trim(v)); },
                  [&f] { return to_string(f.channel); }};
  d["profile"] = {[&f](const std::string& v) { f.profile = profile_from_string(trim(v)); },
                  [&f] { return to_string(f.profile); }};
  d["amplitude"] = bind(f.amplitude);
  d["s"] = bind(f.s);
  d["n"] = bind(f.n);
  d["center_p1"] = bind(f.center_p1);
  d["center_p3"] = bind(f.center_p3);
  d["width_p1"] = bind(f.width_p1);
  d["width_p3"] = bind(f.width_p3);
  d["center_r"] = bind(f.center_r);
  d["width_r"] = bind(f.width_r);
  d["axis"] = bind(f.axis);
  d["cap_angle"] = bind(f.cap_angle);
  d["x2"] = bind(f.x2);
  d["t_min"] = bind(c.decay.t_min);
  d["t_max"] = bind(c.decay.t_max);
  d["per_decade"] = bind(c.decay.per_decade);
  d["negative_control"] = bind(c.decay.negative_control);
  d["transverse_nodes"] = bind(c.decay.orders.transverse);
  d["x2_nodes"] = bind(c.decay.orders.x2);
  d["azimuth_nodes"] = bind(c.decay.orders.azimuth);
  d["oscillatory_nodes"] = bind(c.decay.orders.oscillatory);

  auto& run = s["run"];
  run["seed"] = {[&c](const std::string& v) {
                   const auto t = trim(v);
                   std::uint64_t x = 0;
                   const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
                   if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                     throw ConfigError("seed must be a non-negative integer, got '" + t + "'");
                   c.run.seed = x;
                 },
                 [&c] { return std::to_string(c.run.seed); }};
  run["samples"] = bind(c.run.samples);
  run["times"] = {[&c](const std::string& v) { c.run.times = parse_list<double>(v, parse_double); },
                  [&c] { return join(c.run.times, format_double); }};
  run["dense_limit"] = {[&c](const std::string& v) { c.run.dense_limit = static_cast<Eigen::Index>(parse_int(v)); },
                        [&c] { return std::to_string(static_cast<long long>(c.run.dense_limit)); }};
  return s;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig config;
  Schema s = schema(config);
  std::string line, section;
  std::set<std::pair<std::string, std::string>> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!s.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    auto& sec = s.at(section);
    const auto it = sec.find(key);
    if (it == sec.end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert({section, key}).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->second.set(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + section + "." + key + ": " + e.what());
    }
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string canonical_config(const RunConfig& config) {
  RunConfig copy = config;
  const Schema s = schema(copy);
  std::string out;
  for (const auto& [section, keys] : s) {
    out += "[" + section + "]\n";
    for (const auto& [key, b] : keys) out += key + " = " + b.get() + "\n";
  }
  return out;
}

std::string config_digest(const RunConfig& config) { return hex_digest(canonical_config(config)); }

void validate(const RunConfig& c) {
  try {
    c.model.validate();
    (void)build_grids(c.model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.g_over_g0 && !(*c.g_over_g0 >= 0)) throw ConfigError("g_over_g0 must be non-negative");
  if (c.g_over_g0 && c.model.g != 0) throw ConfigError("set either g or g_over_g0, not both");
  if (c.spectral.k_low < 1) throw ConfigError("k_low must be at least 1");
  for (double x : c.spectral.couplings_over_g0)
    if (!(x > 0)) throw ConfigError("couplings_over_g0 entries must be positive");
  if (!(c.decay.t_min > 0) || !(c.decay.t_max > c.decay.t_min) || c.decay.per_decade < 1)
    throw ConfigError("decay times need 0 < t_min < t_max and per_decade >= 1");
  const auto& o = c.decay.orders;
  if (o.transverse < 2 || o.x2 < 2 || o.azimuth < 2 || o.oscillatory < 2) throw ConfigError("decay node counts must be >= 2");
  const auto& f = c.decay.test;
  if (!(f.width_p1 > 0) || !(f.width_p3 > 0) || !(f.width_r > 0) || !(f.cap_angle > 0) || f.n < 0 ||
      (f.s != 1 && f.s != -1) || f.axis.norm() == 0)
    throw ConfigError("invalid decay test function");
  if (c.run.samples < 1) throw ConfigError("samples must be at least 1");
  if (c.run.dense_limit < 1) throw ConfigError("dense_limit must be positive");
}

}  // namespace mudecay

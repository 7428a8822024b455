#include "rotasym/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "rotasym/errors.hpp"

namespace rotasym {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg, line);
}

double to_double(const std::string& v, int line) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) fail(line, "not a number: '" + v + "'");
  return x;
}

long to_long(const std::string& v, int line) {
  long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) fail(line, "not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "not a boolean: '" + v + "'");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Key {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

void range(bool ok, int line, const std::string& what) {
  if (!ok) fail(line, "out of range: " + what);
}

const char* kind_name(InitialSpec::Kind k) {
  switch (k) {
    case InitialSpec::Kind::taylor_green: return "taylor_green";
    case InitialSpec::Kind::random_spectrum: return "random_spectrum";
    case InitialSpec::Kind::file: return "file";
  }
  return "";
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"grid.nh", "horizontal points per axis (even, >= 8) [required]",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 8 && n % 2 == 0 && n <= 4096, l, "grid.nh must be even and >= 8");
         c.nh = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.nh); }},
      {"grid.n3", "vertical points (even, >= 8); default 16",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 8 && n % 2 == 0 && n <= 4096, l, "grid.n3 must be even and >= 8");
         c.n3 = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.n3); }},
      {"profile.b0", "background rotation b0 > 0; default 1",
       [](RunConfig& c, const std::string& v, int l) {
         c.profile.b0 = to_double(v, l);
         range(c.profile.b0 > 0, l, "profile.b0 must be > 0");
       },
       [](const RunConfig& c) { return fmt(c.profile.b0); }},
      {"profile.amplitude", "bump amplitude A (0 = constant b); default 0",
       [](RunConfig& c, const std::string& v, int l) { c.profile.amplitude = to_double(v, l); },
       [](const RunConfig& c) { return fmt(c.profile.amplitude); }},
      {"profile.radius", "bump support radius R in (0, pi); default 1.5",
       [](RunConfig& c, const std::string& v, int l) {
         c.profile.radius = to_double(v, l);
         range(c.profile.radius > 0 && c.profile.radius < 3.141592653589793, l, "profile.radius must lie in (0, pi)");
       },
       [](const RunConfig& c) { return fmt(c.profile.radius); }},
      {"profile.center_x", "bump center x1; default pi",
       [](RunConfig& c, const std::string& v, int l) { c.profile.center_x = to_double(v, l); },
       [](const RunConfig& c) { return fmt(c.profile.center_x); }},
      {"profile.center_y", "bump center x2; default pi",
       [](RunConfig& c, const std::string& v, int l) { c.profile.center_y = to_double(v, l); },
       [](const RunConfig& c) { return fmt(c.profile.center_y); }},
      {"profile.n_bins", "level-set bins (>= 4); default 16",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 4 && n <= 256, l, "profile.n_bins must lie in [4, 256]");
         c.profile.n_bins = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.profile.n_bins); }},
      {"profile.tol_grad", "S/O threshold relative to max|grad b|; default 1e-3",
       [](RunConfig& c, const std::string& v, int l) {
         c.profile.tol_grad = to_double(v, l);
         range(c.profile.tol_grad > 0 && c.profile.tol_grad < 1, l, "profile.tol_grad must lie in (0, 1)");
       },
       [](const RunConfig& c) { return fmt(c.profile.tol_grad); }},
      {"solver.nu", "viscosity >= 0 [required]",
       [](RunConfig& c, const std::string& v, int l) {
         c.solver.nu = to_double(v, l);
         range(c.solver.nu >= 0, l, "solver.nu must be >= 0");
       },
       [](const RunConfig& c) { return fmt(c.solver.nu); }},
      {"solver.eps", "Rossby number > 0 [required unless solver.eps_list is given]",
       [](RunConfig& c, const std::string& v, int l) {
         c.solver.eps = to_double(v, l);
         range(c.solver.eps > 0, l, "solver.eps must be > 0");
       },
       [](const RunConfig& c) { return fmt(c.solver.eps); }},
      {"solver.eps_list", "comma-separated decreasing Rossby numbers for `convergence`",
       [](RunConfig& c, const std::string& v, int l) {
         c.eps_list.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           double e = to_double(trim(item), l);
           range(e > 0, l, "solver.eps_list entries must be > 0");
           if (!c.eps_list.empty()) range(e < c.eps_list.back(), l, "solver.eps_list must be decreasing");
           c.eps_list.push_back(e);
         }
         range(!c.eps_list.empty(), l, "solver.eps_list is empty");
       },
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.eps_list.size(); ++i) s += (i ? ", " : "") + fmt(c.eps_list[i]);
         return s;
       }},
      {"solver.dt", "time step > 0; default 1e-3",
       [](RunConfig& c, const std::string& v, int l) {
         c.solver.dt = to_double(v, l);
         range(c.solver.dt > 0, l, "solver.dt must be > 0");
       },
       [](const RunConfig& c) { return fmt(c.solver.dt); }},
      {"solver.t_end", "final time > 0; default 1",
       [](RunConfig& c, const std::string& v, int l) {
         c.solver.t_end = to_double(v, l);
         range(c.solver.t_end > 0, l, "solver.t_end must be > 0");
       },
       [](const RunConfig& c) { return fmt(c.solver.t_end); }},
      {"solver.cfl_safety", "CFL safety factor in (0, 1]; default 0.9",
       [](RunConfig& c, const std::string& v, int l) {
         c.solver.cfl_safety = to_double(v, l);
         range(c.solver.cfl_safety > 0 && c.solver.cfl_safety <= 1, l, "solver.cfl_safety must lie in (0, 1]");
       },
       [](const RunConfig& c) { return fmt(c.solver.cfl_safety); }},
      {"solver.truncation", "J_n cutoff of the limit system (-1: n_h/3); default -1",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= -1, l, "solver.truncation must be >= -1");
         c.solver.truncation = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.solver.truncation); }},
      {"solver.midpoint_iters", "fixed-point iterations of the rotation step; default 200",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 1 && n <= 100000, l, "solver.midpoint_iters must lie in [1, 100000]");
         c.solver.midpoint_iters = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.solver.midpoint_iters); }},
      {"solver.snapshot_stride", "steps between stored snapshots; default 10",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 1, l, "solver.snapshot_stride must be >= 1");
         c.solver.snapshot_stride = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.solver.snapshot_stride); }},
      {"solver.tol_kernel", "range tolerance of the limit system; default 1e-6",
       [](RunConfig& c, const std::string& v, int l) {
         c.solver.tol_kernel = to_double(v, l);
         range(c.solver.tol_kernel > 0, l, "solver.tol_kernel must be > 0");
       },
       [](const RunConfig& c) { return fmt(c.solver.tol_kernel); }},
      {"initial.kind", "taylor_green | random_spectrum | file; default random_spectrum",
       [](RunConfig& c, const std::string& v, int l) {
         if (v == "taylor_green") c.initial.kind = InitialSpec::Kind::taylor_green;
         else if (v == "random_spectrum") c.initial.kind = InitialSpec::Kind::random_spectrum;
         else if (v == "file") c.initial.kind = InitialSpec::Kind::file;
         else fail(l, "unknown initial.kind '" + v + "'");
       },
       [](const RunConfig& c) { return std::string(kind_name(c.initial.kind)); }},
      {"initial.seed", "random seed; default 1",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 0, l, "initial.seed must be >= 0");
         c.initial.seed = std::uint64_t(n);
       },
       [](const RunConfig& c) { return std::to_string(c.initial.seed); }},
      {"initial.slope", "per-mode amplitude exponent; default -2",
       [](RunConfig& c, const std::string& v, int l) { c.initial.slope = to_double(v, l); },
       [](const RunConfig& c) { return fmt(c.initial.slope); }},
      {"initial.band", "spectral band |k| <= band (0: n_h/4); default 0",
       [](RunConfig& c, const std::string& v, int l) {
         long n = to_long(v, l);
         range(n >= 0, l, "initial.band must be >= 0");
         c.initial.band = int(n);
       },
       [](const RunConfig& c) { return std::to_string(c.initial.band); }},
      {"initial.amplitude", "Taylor-Green amplitude; default 1",
       [](RunConfig& c, const std::string& v, int l) { c.initial.amplitude = to_double(v, l); },
       [](const RunConfig& c) { return fmt(c.initial.amplitude); }},
      {"initial.path", "snapshot file for initial.kind = file",
       [](RunConfig& c, const std::string& v, int) { c.initial.path = v; },
       [](const RunConfig& c) { return c.initial.path; }},
      {"output.dir", "output directory; default rotasym_out",
       [](RunConfig& c, const std::string& v, int l) {
         range(!v.empty(), l, "output.dir must not be empty");
         c.output_dir = v;
       },
       [](const RunConfig& c) { return c.output_dir; }},
      {"diagnostics.kernel_residual", "record kernel_residual of the state at snapshots; default true",
       [](RunConfig& c, const std::string& v, int l) { c.diagnostics.kernel_residual = to_bool(v, l); },
       [](const RunConfig& c) { return std::string(c.diagnostics.kernel_residual ? "true" : "false"); }},
      {"diagnostics.alignment", "record alignment_error at snapshots; default true",
       [](RunConfig& c, const std::string& v, int l) { c.diagnostics.alignment = to_bool(v, l); },
       [](const RunConfig& c) { return std::string(c.diagnostics.alignment ? "true" : "false"); }},
      {"diagnostics.coupling", "record the coupling pairing at snapshots; default false",
       [](RunConfig& c, const std::string& v, int l) { c.diagnostics.coupling = to_bool(v, l); },
       [](const RunConfig& c) { return std::string(c.diagnostics.coupling ? "true" : "false"); }},
  };
  return k;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, const Key*> table;
  for (const Key& k : keys()) table[k.name] = &k;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    auto it = table.find(key);
    if (it == table.end()) fail(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    if (value.empty() && key != "initial.path") fail(line, "missing value for '" + key + "'");
    it->second->set(cfg, value, line);
  }
  if (!seen.count("grid.nh")) throw ConfigError("config: missing required key 'grid.nh'", 0);
  if (!seen.count("solver.nu")) throw ConfigError("config: missing required key 'solver.nu'", 0);
  if (!seen.count("solver.eps") && !seen.count("solver.eps_list"))
    throw ConfigError("config: missing required key 'solver.eps' (or 'solver.eps_list')", 0);
  if (!seen.count("solver.eps") && !cfg.eps_list.empty()) cfg.solver.eps = cfg.eps_list.front();
  if (cfg.initial.kind == InitialSpec::Kind::file && cfg.initial.path.empty())
    throw ConfigError("config: initial.kind = file requires initial.path", 0);
  if (cfg.profile.b0 + std::min(0.0, cfg.profile.amplitude) <= 0.0)
    throw ConfigError("config: rotation profile b0 + A must stay positive", 0);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read '" + path + "'", 0);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const Key& k : keys()) {
    const std::string sec = k.name.substr(0, k.name.find('.'));
    if (k.name == "solver.eps_list" && cfg.eps_list.empty()) continue;
    if (k.name == "initial.path" && cfg.initial.path.empty()) continue;
    if (sec != section) {
      if (!section.empty()) os << '\n';
      section = sec;
    }
    os << k.name << " = " << k.get(cfg) << '\n';
  }
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : emit_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_reference() {
  std::ostringstream os;
  for (const Key& k : keys()) os << "  " << std::left << std::setw(30) << k.name << k.help << '\n';
  return os.str();
}

}  // namespace rotasym

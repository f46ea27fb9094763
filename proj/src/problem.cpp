#include "monsolve/problem.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace monsolve {

const char* to_string(Method m) {
  switch (m) {
    case Method::gmopcgm: return "gmopcgm";
    case Method::mopcgm: return "mopcgm";
    case Method::gcgpm: return "gcgpm";
    case Method::cgpm: return "cgpm";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  for (Method m : all_methods())
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown method: '" + s +
                              "' (expected gmopcgm, mopcgm, gcgpm or cgpm)");
}

std::vector<Method> all_methods() {
  return {Method::gmopcgm, Method::mopcgm, Method::gcgpm, Method::cgpm};
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("FeasibleSet::box: bound size mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
      throw std::invalid_argument("FeasibleSet::box: empty box at coordinate " +
                                  std::to_string(i));
  }
  FeasibleSet s;
  s.kind = SetKind::box;
  s.lower = std::move(lo);
  s.upper = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::box_lower(std::size_t n, double lo) {
  const double inf = std::numeric_limits<double>::infinity();
  return box(Vec(n, lo), Vec(n, inf));
}

FeasibleSet FeasibleSet::box_const(std::size_t n, double lo, double hi) {
  return box(Vec(n, lo), Vec(n, hi));
}

bool FeasibleSet::contains(const Vec& x) const {
  if (kind == SetKind::whole_space) return true;
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

SolverConfig default_config(Method m) {
  SolverConfig c;
  switch (m) {
    case Method::gmopcgm:
    case Method::mopcgm:
      c.tau = 1.0;
      c.rho = 0.8;
      c.beta = 0.5;
      c.zeta = 1e-4;
      c.alpha_min = 0.1;
      c.alpha_max = 2.0;
      c.gamma = 1.1;
      c.gamma1 = 1.1;
      c.gamma2 = 1.8;
      c.gamma3 = 1.0;
      c.gamma4 = 1.0;
      break;
    case Method::gcgpm:
    case Method::cgpm:
      c.tau = 0.001;
      c.rho = 0.5;
      c.beta = 0.6;
      c.zeta = 0.1;
      c.alpha_min = 0.55;
      c.alpha_max = 4.9;
      c.gamma = 1.8;
      c.gamma1 = 1.1;
      c.gamma2 = 1.7;
      c.gamma3 = 1.05;
      c.gamma4 = 1.05;
      break;
  }
  c.zeta1 = 1.0;
  c.zeta2 = 1.0;
  c.lambda0 = 1.0;
  c.tol = 1e-11;
  c.max_iter = 2000;
  c.max_backtracks = 60;
  return c;
}

SolverConfig default_cs_config(Method m) {
  SolverConfig c = default_config(m);
  if (m == Method::gmopcgm || m == Method::mopcgm) {
    c.tau = 1.05;
    c.gamma3 = 0.85;
    c.gamma4 = 1.0;
  }
  c.tol = 1e-5;
  c.max_iter = 20000;
  return c;
}

ValidationResult validate_config(const SolverConfig& cfg, Method m) {
  std::vector<std::string> bad;
  auto fail = [&](const std::string& msg) { bad.push_back(msg); };

  auto in_open_01 = [](double v) { return v > 0.0 && v < 1.0; };
  auto in_open_02 = [](double v) { return v > 0.0 && v < 2.0; };

  if (!(cfg.tau > 0.0)) fail("tau must be > 0");
  if (!in_open_01(cfg.rho)) fail("rho must lie in (0,1)");
  if (!(cfg.beta > 0.0)) fail("beta must be > 0");
  if (!(cfg.zeta > 0.0)) fail("zeta must be > 0");
  if (!(cfg.zeta1 > 0.0 && cfg.zeta1 <= cfg.zeta2))
    fail("zeta1, zeta2 must satisfy 0 < zeta1 <= zeta2");
  if (!(cfg.alpha_min > 0.0 && cfg.alpha_min <= cfg.alpha_max))
    fail("alpha_min, alpha_max must satisfy 0 < alpha_min <= alpha_max");
  if (!(cfg.lambda0 > 0.0)) fail("lambda0 must be > 0");
  if (!in_open_02(cfg.gamma)) fail("gamma must lie in (0,2)");
  if (!in_open_02(cfg.gamma1)) fail("gamma1 must lie in (0,2)");
  if (!in_open_02(cfg.gamma2)) fail("gamma2 must lie in (0,2)");
  if (!in_open_02(cfg.gamma3)) fail("gamma3 must lie in (0,2)");
  if (!in_open_02(cfg.gamma4)) fail("gamma4 must lie in (0,2)");
  if (!(cfg.tol > 0.0)) fail("tol must be > 0");
  if (cfg.max_iter < 1) fail("max_iter must be >= 1");
  if (cfg.max_backtracks < 1) fail("max_backtracks must be >= 1");

  // Descent-bound hypothesis of the generalized CG projection method:
  // without alpha_min >= (1+tau)/2 the search direction may fail to be a
  // descent direction.
  if (m == Method::gcgpm && cfg.alpha_min < 0.5 * (1.0 + cfg.tau))
    fail("alpha_min must be >= (1+tau)/2 for gcgpm (got alpha_min=" +
         std::to_string(cfg.alpha_min) + ", (1+tau)/2=" +
         std::to_string(0.5 * (1.0 + cfg.tau)) + ")");

  if (bad.empty()) return {true, ""};
  std::string msg = "invalid config for " + std::string(to_string(m)) + ": ";
  for (std::size_t i = 0; i < bad.size(); ++i) {
    if (i) msg += "; ";
    msg += bad[i];
  }
  return {false, msg};
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged_on_x: return "converged_on_x";
    case SolveStatus::converged_on_z: return "converged_on_z";
    case SolveStatus::small_direction: return "small_direction";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::line_search_failure: return "line_search_failure";
  }
  return "?";
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct FieldDef {
  const char* key;
  double SolverConfig::* dptr;
  int SolverConfig::* iptr;
};

// Serialization order; also the full key set accepted by the parser.
const FieldDef kFields[] = {
    {"tau", &SolverConfig::tau, nullptr},
    {"rho", &SolverConfig::rho, nullptr},
    {"beta", &SolverConfig::beta, nullptr},
    {"zeta", &SolverConfig::zeta, nullptr},
    {"zeta1", &SolverConfig::zeta1, nullptr},
    {"zeta2", &SolverConfig::zeta2, nullptr},
    {"alpha_min", &SolverConfig::alpha_min, nullptr},
    {"alpha_max", &SolverConfig::alpha_max, nullptr},
    {"lambda0", &SolverConfig::lambda0, nullptr},
    {"gamma", &SolverConfig::gamma, nullptr},
    {"gamma1", &SolverConfig::gamma1, nullptr},
    {"gamma2", &SolverConfig::gamma2, nullptr},
    {"gamma3", &SolverConfig::gamma3, nullptr},
    {"gamma4", &SolverConfig::gamma4, nullptr},
    {"tol", &SolverConfig::tol, nullptr},
    {"max_iter", nullptr, &SolverConfig::max_iter},
    {"max_backtracks", nullptr, &SolverConfig::max_backtracks},
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string serialize_config(const SolverConfig& cfg) {
  std::string out;
  for (const auto& f : kFields) {
    out += f.key;
    out += " = ";
    if (f.dptr)
      out += fmt_double(cfg.*(f.dptr));
    else
      out += std::to_string(cfg.*(f.iptr));
    out += "\n";
  }
  return out;
}

SolverConfig parse_config(const std::string& text, SolverConfig base) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, bool> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    const FieldDef* def = nullptr;
    for (const auto& f : kFields)
      if (key == f.key) {
        def = &f;
        break;
      }
    if (!def)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    if (seen[key])
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": repeated key '" + key + "'");
    seen[key] = true;
    std::size_t pos = 0;
    try {
      if (def->dptr) {
        base.*(def->dptr) = std::stod(val, &pos);
      } else {
        base.*(def->iptr) = std::stoi(val, &pos);
      }
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != val.size() || val.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": bad value for '" + key + "': '" + val + "'");
  }
  return base;
}

SolverConfig load_config_file(const std::string& path, SolverConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

void save_config_file(const std::string& path, const SolverConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << serialize_config(cfg);
}

}  // namespace monsolve

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "monsolve/linalg.hpp"

namespace monsolve {

enum class Method { gmopcgm, mopcgm, gcgpm, cgpm };

const char* to_string(Method m);
Method method_from_string(const std::string& s);
std::vector<Method> all_methods();

enum class SetKind { whole_space, box };

/// Closed convex constraint set. Boxes may have infinite bounds on either
/// side; lower <= upper componentwise and the set is nonempty by construction.
struct FeasibleSet {
  SetKind kind = SetKind::whole_space;
  Vec lower;  // box only
  Vec upper;  // box only

  static FeasibleSet whole_space() { return {}; }
  static FeasibleSet box(Vec lo, Vec hi);
  /// [lo, +inf)^n
  static FeasibleSet box_lower(std::size_t n, double lo);
  /// [0, +inf)^n
  static FeasibleSet nonneg(std::size_t n) { return box_lower(n, 0.0); }
  /// [lo, hi]^n
  static FeasibleSet box_const(std::size_t n, double lo, double hi);

  bool contains(const Vec& x) const;
};

using Evaluator = std::function<void(const Vec& x, Vec& out)>;

/// A monotone system G(x) = 0 over a feasible set. The evaluator must be
/// pure: no state, safe to call from several threads at once.
struct Problem {
  std::string id;
  std::size_t dim = 0;
  Evaluator eval;
  FeasibleSet feasible_set;
  std::optional<Vec> known_root;

  Vec operator()(const Vec& x) const {
    Vec out(dim);
    eval(x, out);
    return out;
  }
};

struct SolverConfig {
  double tau = 1.0;
  double rho = 0.8;        // backtracking factor
  double beta = 0.5;       // initial step of the line search
  double zeta = 1e-4;      // line-search sufficient-decrease factor
  double zeta1 = 1.0;      // clamp floor on ||G(z)|| in the line search
  double zeta2 = 1.0;      // clamp ceiling
  double alpha_min = 0.1;  // lambda clamp interval
  double alpha_max = 2.0;
  double lambda0 = 1.0;
  double gamma = 1.1;   // relaxation factor of the projection step
  double gamma1 = 1.1;  // gamma <- min(gamma*gamma1, gamma2) on decrease
  double gamma2 = 1.8;
  double gamma3 = 1.0;  // gamma <- max(gamma*gamma3, gamma4) otherwise
  double gamma4 = 1.0;
  double tol = 1e-11;
  int max_iter = 2000;
  int max_backtracks = 60;
};

/// Parameter sets used for the equation benchmarks.
SolverConfig default_config(Method m);
/// Parameter sets used for the sparse-recovery application (looser stop,
/// larger iteration budget, retuned tau/gamma3 for the Perry-type methods).
SolverConfig default_cs_config(Method m);

struct ValidationResult {
  bool ok = true;
  std::string message;  // names every offending field when !ok
};

ValidationResult validate_config(const SolverConfig& cfg, Method m);

enum class SolveStatus {
  converged_on_x,
  converged_on_z,
  small_direction,
  max_iter,
  line_search_failure,
};

const char* to_string(SolveStatus s);

struct TraceRow {
  int k = 0;
  double gnorm = 0.0;
  double alpha = 0.0;
  int backtracks = 0;
  double lambda = 0.0;
  double gamma = 0.0;
  double pnorm = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iter;
  double final_gnorm = 0.0;
  int iterations = 0;
  long long fevals = 0;
  double wall_time_s = 0.0;
  Vec solution;
  std::vector<TraceRow> trace;  // filled only when tracing is requested

  bool converged() const {
    return status == SolveStatus::converged_on_x ||
           status == SolveStatus::converged_on_z;
  }
};

/// Flat key=value form, one field per line, stable order, full precision.
std::string serialize_config(const SolverConfig& cfg);
/// Inverse of serialize_config. Accepts blank lines and '#' comments.
/// Unknown or repeated keys and malformed values raise std::runtime_error
/// naming the offender. Missing keys keep their current value in `base`.
SolverConfig parse_config(const std::string& text, SolverConfig base = {});
SolverConfig load_config_file(const std::string& path, SolverConfig base = {});
void save_config_file(const std::string& path, const SolverConfig& cfg);

}  // namespace monsolve

#pragma once

#include <functional>

#include "monsolve/directions.hpp"
#include "monsolve/problem.hpp"

namespace monsolve {

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  int backtracks = 0;   // index i of the accepted trial alpha = beta * rho^i
  int fevals_used = 0;  // residual evaluations consumed (backtracks + 1 on success)
  Vec z;                // x + alpha p of the accepted trial
  Vec gz;               // G(z) there
};

/// Backtracking search along p for the first i >= 0 with
///   G(x + beta rho^i p)' p <= -zeta * alpha * ||p||^2 * clamp(||G(z)||, zeta1, zeta2).
/// Non-finite trial residuals count as rejected trials. Fails after
/// max_backtracks trials. Requires ||p|| > 0.
LineSearchResult line_search(const Vec& x, const Vec& p, const Evaluator& eval,
                             const SolverConfig& cfg);

/// Relaxed hyperplane projection x_next = P(x - gamma mu gz) with
/// mu = gz'(x - z)/||gz||^2. Requires ||gz|| > 0: a zero residual at z means
/// the caller should have stopped at z.
Vec projection_step(const Vec& x, const Vec& z, const Vec& gz, double gamma,
                    const FeasibleSet& set);

/// gamma <- min(gamma*gamma1, gamma2) after a residual decrease,
/// gamma <- max(gamma*gamma3, gamma4) otherwise; always kept inside
/// [1e-6, 2 - 1e-6] so the relaxation stays admissible.
double update_gamma(double gamma, bool gnorm_decreased, const SolverConfig& cfg);

/// Loop state after iteration k. u_prev caches the modified gradient
/// difference (v or w) formed for the scaling update.
struct IterateState {
  Vec x;
  Vec g;
  Vec p_prev;
  Vec s_prev;
  Vec y_prev;
  Vec u_prev;
  double lambda = 1.0;
  double gamma = 1.0;
  int k = 0;
};

/// Snapshot of one completed iteration, for observers. Pointees are only
/// valid during the callback. x_next is null when the run stopped at z.
struct IterationEvent {
  int k = 0;
  double gnorm = 0.0;   // ||G(x_k)||
  double g_dot_p = 0.0; // G(x_k)' p_k
  double pnorm = 0.0;
  double lambda = 0.0;  // scaling used by this iteration's direction
  double gamma = 0.0;   // relaxation used by this iteration's projection
  double alpha = 0.0;
  int backtracks = 0;
  bool restarted = false;  // direction rule degenerated, fell back to -lambda g
  double gznorm = 0.0;
  double sep_lhs = 0.0;  // G(z)'(x_k - z)
  double sep_rhs = 0.0;  // zeta alpha^2 ||p||^2 clamp(||G(z)||, zeta1, zeta2)
  const Vec* x = nullptr;
  const Vec* z = nullptr;
  const Vec* x_next = nullptr;
};

struct SolveHooks {
  bool record_trace = false;
  std::function<void(const IterationEvent&)> on_iteration;
};

/// Derivative-free projection solve of G(x) = 0 over the problem's feasible
/// set. The initial point is projected onto the set first. Throws
/// std::invalid_argument on config/dimension violations and std::runtime_error
/// if the residual is non-finite at the starting point.
SolveReport solve(const Problem& problem, const Vec& x0, Method method,
                  const SolverConfig& cfg, const SolveHooks& hooks = {});

}  // namespace monsolve

#pragma once

#include <optional>

#include "monsolve/problem.hpp"

namespace monsolve {

/// Relative floor under which a denominator is considered degenerate.
/// `scale` is the product of the norms of the two factors.
inline double denominator_floor(double scale) {
  return 1e-30 * std::max(1.0, scale);
}

/// v = y + tau * s (the Perry-type modified gradient difference).
Vec gmop_v(const Vec& y_prev, const Vec& s_prev, double tau);

struct WVector {
  double r = 1.0;
  Vec w;
};

/// w = y + r * p_prev with r = 1 + max(0, -(p_prev'y)/||p_prev||^2).
/// The shift guarantees p_prev'w >= ||p_prev||^2 > 0.
WVector gcgpm_w(const Vec& y_prev, const Vec& p_prev);

/// Shared inputs of the direction rules. All vectors refer to the previous
/// accepted iteration: p_prev the direction, s_prev = z - x the line-search
/// displacement, y_prev the change in the residual between outer iterates.
struct DirectionInputs {
  const Vec& g;
  const Vec& p_prev;
  const Vec& s_prev;
  const Vec& y_prev;
  double lambda = 1.0;
  double tau = 1.0;
};

struct GmopDirection {
  Vec p;
  double theta = 0.0;
  double t_star = 0.0;
  double m_coef = 0.0;
};

struct GcgpmDirection {
  Vec p;
  double theta = 0.0;
  double r = 1.0;
  double a = 0.0;
};

/// Memoryless Perry-type direction p = -M g + theta p_prev built from the
/// scaled-identity secant model. Satisfies g'p = -lambda ||g||^2 exactly.
/// Empty result means a degenerate denominator; the caller restarts with
/// p = -lambda g.
std::optional<GmopDirection> dir_gmopcgm(const DirectionInputs& in);

/// dir_gmopcgm with lambda frozen at 1 (the fixed-scaling baseline).
std::optional<GmopDirection> dir_mopcgm_baseline(const DirectionInputs& in);

/// Three-term CG direction p = -lambda g + theta p_prev + tau a w.
/// With lambda >= (1+tau)/2 it satisfies
///   g'p <= -lambda (1 - (1+tau)^2 / (4 lambda^2)) ||g||^2.
std::optional<GcgpmDirection> dir_gcgpm(const DirectionInputs& in);

/// dir_gcgpm with lambda frozen at 2 and tau = 0 (drops the w term).
std::optional<GcgpmDirection> dir_cgpm_baseline(const DirectionInputs& in);

/// Adaptive scaling update. Keeps lambda when the residual norm decreased;
/// otherwise takes the larger of the two Barzilai-Borwein-type ratios
/// ||u||^2/(s'u) and (s'u)/||s||^2, clamped to [alpha_min, alpha_max].
/// A degenerate s'u resets to lambda0.
double update_lambda(double lambda, const Vec& s, const Vec& u,
                     bool gnorm_decreased, double alpha_min, double alpha_max,
                     double lambda0);

}  // namespace monsolve

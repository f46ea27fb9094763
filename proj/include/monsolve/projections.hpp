#pragma once

#include "monsolve/problem.hpp"

namespace monsolve {

/// Euclidean projection onto the feasible set. Identity for the whole space,
/// componentwise clamping for boxes. Non-expansive and idempotent.
Vec project_set(const Vec& x, const FeasibleSet& set);

/// In-place variant.
void project_set_inplace(Vec& x, const FeasibleSet& set);

/// Projection of a scalar onto [lo, hi]; requires lo <= hi.
double clamp_interval(double t, double lo, double hi);

}  // namespace monsolve

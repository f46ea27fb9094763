#include "monsolve/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monsolve {

void project_set_inplace(Vec& x, const FeasibleSet& set) {
  if (set.kind == SetKind::whole_space) return;
  if (x.size() != set.lower.size())
    throw std::invalid_argument("project_set: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::min(std::max(x[i], set.lower[i]), set.upper[i]);
}

Vec project_set(const Vec& x, const FeasibleSet& set) {
  Vec r = x;
  project_set_inplace(r, set);
  return r;
}

double clamp_interval(double t, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw std::invalid_argument("clamp_interval: empty interval");
  return std::min(std::max(t, lo), hi);
}

}  // namespace monsolve

#include "monsolve/directions.hpp"

#include <cmath>
#include <stdexcept>

#include "monsolve/projections.hpp"

namespace monsolve {

Vec gmop_v(const Vec& y_prev, const Vec& s_prev, double tau) {
  if (y_prev.size() != s_prev.size())
    throw std::invalid_argument("gmop_v: size mismatch");
  Vec v = y_prev;
  axpy(tau, s_prev, v);
  return v;
}

WVector gcgpm_w(const Vec& y_prev, const Vec& p_prev) {
  if (y_prev.size() != p_prev.size())
    throw std::invalid_argument("gcgpm_w: size mismatch");
  const double pp = norm2_sq(p_prev);
  if (!(pp > 0.0)) throw std::invalid_argument("gcgpm_w: p_prev is zero");
  const double py = dot(p_prev, y_prev);
  WVector out;
  out.r = 1.0 + std::max(0.0, -py / pp);
  out.w = y_prev;
  axpy(out.r, p_prev, out.w);
  return out;
}

std::optional<GmopDirection> dir_gmopcgm(const DirectionInputs& in) {
  const double ss = norm2_sq(in.s_prev);
  const double gg = norm2_sq(in.g);
  if (!(ss > 0.0) || !(gg > 0.0)) return std::nullopt;

  const Vec v = gmop_v(in.y_prev, in.s_prev, in.tau);
  const double pv = dot(in.p_prev, v);
  if (std::fabs(pv) <= denominator_floor(norm2(in.p_prev) * norm2(v)))
    return std::nullopt;

  GmopDirection d;
  d.t_star = in.lambda * dot(in.s_prev, v) / ss;
  // theta = (v - t* s)' g / (p_prev' v)
  double num = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    num += (v[i] - d.t_star * in.s_prev[i]) * in.g[i];
  d.theta = num / pv;
  d.m_coef = in.lambda + d.theta * dot(in.g, in.p_prev) / gg;
  d.p.resize(in.g.size());
  for (std::size_t i = 0; i < in.g.size(); ++i)
    d.p[i] = -d.m_coef * in.g[i] + d.theta * in.p_prev[i];
  return d;
}

std::optional<GmopDirection> dir_mopcgm_baseline(const DirectionInputs& in) {
  DirectionInputs fixed{in.g, in.p_prev, in.s_prev, in.y_prev, 1.0, in.tau};
  return dir_gmopcgm(fixed);
}

std::optional<GcgpmDirection> dir_gcgpm(const DirectionInputs& in) {
  const double pp = norm2_sq(in.p_prev);
  if (!(pp > 0.0)) return std::nullopt;

  WVector wv = gcgpm_w(in.y_prev, in.p_prev);
  const Vec& w = wv.w;
  const double pw = dot(in.p_prev, w);  // >= ||p_prev||^2 by construction
  if (std::fabs(pw) <= denominator_floor(norm2(in.p_prev) * norm2(w)))
    return std::nullopt;

  GcgpmDirection d;
  d.r = wv.r;
  const double gp = dot(in.g, in.p_prev);
  const double gw = dot(in.g, w);
  d.a = gp / pw;
  d.theta = gw / pw - in.lambda * norm2_sq(w) * gp / (pw * pw);
  d.p.resize(in.g.size());
  const double ta = in.tau * d.a;
  for (std::size_t i = 0; i < in.g.size(); ++i)
    d.p[i] = -in.lambda * in.g[i] + d.theta * in.p_prev[i] + ta * w[i];
  return d;
}

std::optional<GcgpmDirection> dir_cgpm_baseline(const DirectionInputs& in) {
  DirectionInputs fixed{in.g, in.p_prev, in.s_prev, in.y_prev, 2.0, 0.0};
  return dir_gcgpm(fixed);
}

double update_lambda(double lambda, const Vec& s, const Vec& u,
                     bool gnorm_decreased, double alpha_min, double alpha_max,
                     double lambda0) {
  if (gnorm_decreased) return lambda;
  const double su = dot(s, u);
  if (su <= denominator_floor(norm2(s) * norm2(u))) return lambda0;
  const double cand = std::max(norm2_sq(u) / su, su / norm2_sq(s));
  return clamp_interval(cand, alpha_min, alpha_max);
}

}  // namespace monsolve

#include "monsolve/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "monsolve/projections.hpp"

namespace monsolve {

LineSearchResult line_search(const Vec& x, const Vec& p, const Evaluator& eval,
                             const SolverConfig& cfg) {
  if (x.size() != p.size())
    throw std::invalid_argument("line_search: size mismatch");
  const double pp = norm2_sq(p);
  if (!(pp > 0.0))
    throw std::invalid_argument("line_search: direction is zero");

  LineSearchResult res;
  Vec z(x.size());
  Vec gz(x.size());
  double alpha = cfg.beta;
  for (int i = 0; i < cfg.max_backtracks; ++i, alpha *= cfg.rho) {
    for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] + alpha * p[j];
    eval(z, gz);
    ++res.fevals_used;
    const double lhs = dot(gz, p);
    const double rhs =
        -cfg.zeta * alpha * pp * clamp_interval(norm2(gz), cfg.zeta1, cfg.zeta2);
    // A NaN lhs fails the comparison and counts as a rejected trial.
    if (lhs <= rhs) {
      res.ok = true;
      res.alpha = alpha;
      res.backtracks = i;
      res.z = std::move(z);
      res.gz = std::move(gz);
      return res;
    }
  }
  res.backtracks = cfg.max_backtracks;
  return res;
}

Vec projection_step(const Vec& x, const Vec& z, const Vec& gz, double gamma,
                    const FeasibleSet& set) {
  const double gg = norm2_sq(gz);
  if (!(gg > 0.0))
    throw std::invalid_argument(
        "projection_step: zero residual at z, stop there instead");
  const double mu = (dot(gz, x) - dot(gz, z)) / gg;
  Vec next(x.size());
  const double step = gamma * mu;
  for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] - step * gz[i];
  project_set_inplace(next, set);
  return next;
}

double update_gamma(double gamma, bool gnorm_decreased,
                    const SolverConfig& cfg) {
  const double g = gnorm_decreased ? std::min(gamma * cfg.gamma1, cfg.gamma2)
                                   : std::max(gamma * cfg.gamma3, cfg.gamma4);
  return clamp_interval(g, 1e-6, 2.0 - 1e-6);
}

namespace {

double effective_lambda0(Method m, const SolverConfig& cfg) {
  switch (m) {
    case Method::mopcgm: return 1.0;
    case Method::cgpm: return 2.0;
    default: return cfg.lambda0;
  }
}

}  // namespace

SolveReport solve(const Problem& problem, const Vec& x0, Method method,
                  const SolverConfig& cfg, const SolveHooks& hooks) {
  const ValidationResult vr = validate_config(cfg, method);
  if (!vr.ok) throw std::invalid_argument(vr.message);
  if (problem.dim == 0 || !problem.eval)
    throw std::invalid_argument("solve: problem has no evaluator");
  if (x0.size() != problem.dim)
    throw std::invalid_argument("solve: x0 dimension mismatch");
  if (!all_finite(x0))
    throw std::invalid_argument("solve: x0 has non-finite entries");

  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  auto finish = [&](SolveStatus st, Vec sol, double gnorm, int iters,
                    long long fevals) {
    rep.status = st;
    rep.solution = std::move(sol);
    rep.final_gnorm = gnorm;
    rep.iterations = iters;
    rep.fevals = fevals;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
  };

  IterateState st;
  st.x = project_set(x0, problem.feasible_set);
  st.g.resize(problem.dim);
  problem.eval(st.x, st.g);
  long long fevals = 1;
  if (!all_finite(st.g))
    throw std::runtime_error("solve: residual non-finite at initial point");
  double gnorm = norm2(st.g);
  st.lambda = effective_lambda0(method, cfg);
  st.gamma = cfg.gamma;
  st.k = 0;

  Vec best_x = st.x;
  double best_gnorm = gnorm;

  const bool adaptive = method == Method::gmopcgm || method == Method::gcgpm;
  const double tau = method == Method::cgpm ? 0.0 : cfg.tau;

  while (true) {
    if (gnorm < cfg.tol)
      return finish(SolveStatus::converged_on_x, st.x, gnorm, st.k, fevals);
    if (st.k >= cfg.max_iter)
      return finish(SolveStatus::max_iter, st.x, gnorm, st.k, fevals);

    // Search direction.
    Vec p;
    double lambda_used = st.lambda;
    bool restarted = false;
    if (st.k == 0) {
      p = scaled(-1.0, st.g);
      lambda_used = 1.0;
    } else {
      DirectionInputs in{st.g, st.p_prev, st.s_prev, st.y_prev, st.lambda,
                         cfg.tau};
      bool got = false;
      switch (method) {
        case Method::gmopcgm:
          if (auto d = dir_gmopcgm(in)) p = std::move(d->p), got = true;
          break;
        case Method::mopcgm:
          if (auto d = dir_mopcgm_baseline(in)) p = std::move(d->p), got = true;
          break;
        case Method::gcgpm:
          if (auto d = dir_gcgpm(in)) p = std::move(d->p), got = true;
          break;
        case Method::cgpm:
          if (auto d = dir_cgpm_baseline(in)) p = std::move(d->p), got = true;
          break;
      }
      if (!got || !all_finite(p)) {
        p = scaled(-st.lambda, st.g);
        restarted = true;
      }
    }
    const double pnorm = norm2(p);

    LineSearchResult ls = line_search(st.x, p, problem.eval, cfg);
    fevals += ls.fevals_used;
    if (!ls.ok)
      return finish(SolveStatus::line_search_failure, best_x, best_gnorm, st.k,
                    fevals);

    const double gznorm = norm2(ls.gz);

    IterationEvent ev;
    ev.k = st.k;
    ev.gnorm = gnorm;
    ev.g_dot_p = dot(st.g, p);
    ev.pnorm = pnorm;
    ev.lambda = lambda_used;
    ev.gamma = st.gamma;
    ev.alpha = ls.alpha;
    ev.backtracks = ls.backtracks;
    ev.restarted = restarted;
    ev.gznorm = gznorm;
    {
      double lhs = 0.0;
      for (std::size_t i = 0; i < st.x.size(); ++i)
        lhs += ls.gz[i] * (st.x[i] - ls.z[i]);
      ev.sep_lhs = lhs;
      ev.sep_rhs = cfg.zeta * ls.alpha * ls.alpha * norm2_sq(p) *
                   clamp_interval(gznorm, cfg.zeta1, cfg.zeta2);
    }
    ev.x = &st.x;
    ev.z = &ls.z;

    auto push_trace = [&] {
      if (hooks.record_trace)
        rep.trace.push_back({st.k, gnorm, ls.alpha, ls.backtracks, lambda_used,
                             st.gamma, pnorm});
    };

    if ((gznorm < cfg.tol && problem.feasible_set.contains(ls.z)) ||
        gznorm == 0.0) {
      push_trace();
      if (hooks.on_iteration) hooks.on_iteration(ev);
      return finish(SolveStatus::converged_on_z, std::move(ls.z), gznorm,
                    st.k + 1, fevals);
    }

    Vec x_next =
        projection_step(st.x, ls.z, ls.gz, st.gamma, problem.feasible_set);
    // Diverging runs overflow here first; stop with the best iterate seen
    // rather than feeding non-finite values back into the direction rules.
    if (!all_finite(x_next)) {
      push_trace();
      ev.x_next = &x_next;
      if (hooks.on_iteration) hooks.on_iteration(ev);
      return finish(SolveStatus::line_search_failure, best_x, best_gnorm,
                    st.k + 1, fevals);
    }
    Vec g_next(problem.dim);
    problem.eval(x_next, g_next);
    ++fevals;
    const double gnorm_next = norm2(g_next);
    if (!all_finite(g_next) || !std::isfinite(gnorm_next)) {
      push_trace();
      ev.x_next = &x_next;
      if (hooks.on_iteration) hooks.on_iteration(ev);
      return finish(SolveStatus::line_search_failure, best_x, best_gnorm,
                    st.k + 1, fevals);
    }
    const bool decreased = gnorm_next < gnorm;

    push_trace();

    const double gamma_next = update_gamma(st.gamma, decreased, cfg);

    // Memory for the next direction, and the scaling update.
    st.s_prev = sub(ls.z, st.x);
    st.y_prev = sub(g_next, st.g);
    if (adaptive) {
      if (method == Method::gmopcgm) {
        st.u_prev = gmop_v(st.y_prev, st.s_prev, tau);
      } else {
        st.u_prev = gcgpm_w(st.y_prev, p).w;
      }
      st.lambda = update_lambda(st.lambda, st.s_prev, st.u_prev, decreased,
                                cfg.alpha_min, cfg.alpha_max, cfg.lambda0);
    }

    ev.x_next = &x_next;
    if (hooks.on_iteration) hooks.on_iteration(ev);

    if (pnorm < 0.1 * cfg.tol)
      return finish(SolveStatus::small_direction, std::move(x_next),
                    gnorm_next, st.k + 1, fevals);

    st.p_prev = std::move(p);
    st.x = std::move(x_next);
    st.g = std::move(g_next);
    st.gamma = gamma_next;
    gnorm = gnorm_next;
    if (gnorm < best_gnorm) {
      best_gnorm = gnorm;
      best_x = st.x;
    }
    ++st.k;
  }
}

}  // namespace monsolve

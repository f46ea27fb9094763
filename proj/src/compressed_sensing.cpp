#include "monsolve/compressed_sensing.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "monsolve/benchmark.hpp"
#include "monsolve/rng.hpp"
#include "monsolve/solver.hpp"

namespace monsolve {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<const Eigen::VectorXd>;

}  // namespace

CsInstance generate(std::size_t n, std::size_t m, std::size_t k, double sigma,
                    std::uint64_t seed, HScaling scaling,
                    std::optional<double> eta_override) {
  if (!(k >= 1 && k < m && m < n))
    throw std::invalid_argument("generate: require 1 <= k < m < n");
  if (sigma < 0.0) throw std::invalid_argument("generate: sigma >= 0");

  CsInstance inst;
  inst.n = n;
  inst.m = m;
  inst.k = k;
  inst.sigma = sigma;
  inst.seed = seed;

  Rng rng(seed);
  const double scale =
      scaling == HScaling::inv_sqrt_m ? 1.0 / std::sqrt(static_cast<double>(m))
                                      : 1.0;
  inst.h.resize(m * n);
  for (auto& v : inst.h) v = scale * rng.gaussian();

  // k spike positions without replacement (partial Fisher-Yates), then signs.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t t = 0; t < k; ++t) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(t), static_cast<std::int64_t>(n - 1)));
    std::swap(idx[t], idx[j]);
  }
  inst.x_true.assign(n, 0.0);
  for (std::size_t t = 0; t < k; ++t)
    inst.x_true[idx[t]] = rng.uniform() < 0.5 ? 1.0 : -1.0;

  inst.y.resize(m);
  {
    MapMat H(inst.h.data(), m, n);
    MapVec xt(inst.x_true.data(), n);
    Eigen::Map<Eigen::VectorXd>(inst.y.data(), m).noalias() = H * xt;
  }
  for (auto& v : inst.y) v += sigma * rng.gaussian();

  inst.hty.resize(n);
  {
    MapMat H(inst.h.data(), m, n);
    MapVec yv(inst.y.data(), m);
    Eigen::Map<Eigen::VectorXd>(inst.hty.data(), n).noalias() =
        H.transpose() * yv;
  }
  inst.eta = eta_override ? *eta_override : 0.01 * inf_norm(inst.hty);
  return inst;
}

void cs_residual(const Vec& z, const CsInstance& inst, Vec& out) {
  const std::size_t n = inst.n;
  if (z.size() != 2 * n)
    throw std::invalid_argument("cs_residual: z must have length 2n");
  out.resize(2 * n);

  thread_local Eigen::VectorXd u, t_m, t_n;
  u.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = z[i] - z[n + i];

  MapMat H(inst.h.data(), inst.m, n);
  t_m.noalias() = H * u;
  t_n.noalias() = H.transpose() * t_m;

  for (std::size_t i = 0; i < n; ++i) {
    const double q1 = t_n[static_cast<Eigen::Index>(i)] + inst.eta - inst.hty[i];
    const double q2 = -t_n[static_cast<Eigen::Index>(i)] + inst.eta + inst.hty[i];
    out[i] = std::min(z[i], q1);
    out[n + i] = std::min(z[n + i], q2);
  }
}

std::vector<double> dense_cs_q(const CsInstance& inst) {
  const std::size_t n = inst.n;
  MapMat H(inst.h.data(), inst.m, n);
  const Eigen::MatrixXd A = H.transpose() * H;
  std::vector<double> q(4 * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      q[i * 2 * n + j] = a;
      q[i * 2 * n + (n + j)] = -a;
      q[(n + i) * 2 * n + j] = -a;
      q[(n + i) * 2 * n + (n + j)] = a;
    }
  return q;
}

Vec cs_d(const CsInstance& inst) {
  Vec d(2 * inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) {
    d[i] = inst.eta - inst.hty[i];
    d[inst.n + i] = inst.eta + inst.hty[i];
  }
  return d;
}

Problem make_cs_problem(const CsInstance& inst) {
  Problem p;
  p.id = "cs";
  p.dim = 2 * inst.n;
  p.feasible_set = FeasibleSet::nonneg(2 * inst.n);
  // Borrows the instance: it must outlive the problem.
  const CsInstance* pi = &inst;
  p.eval = [pi](const Vec& z, Vec& out) { cs_residual(z, *pi, out); };
  return p;
}

Vec cs_start(const CsInstance& inst) {
  Vec z(2 * inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) {
    z[i] = std::max(inst.hty[i], 0.0);
    z[inst.n + i] = std::max(-inst.hty[i], 0.0);
  }
  return z;
}

Recovery recover(const CsInstance& inst, Method method,
                 const SolverConfig& cfg) {
  const Problem prob = make_cs_problem(inst);
  Recovery rec;
  rec.report = solve(prob, cs_start(inst), method, cfg);
  const Vec& z = rec.report.solution;
  rec.x_rec.resize(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) rec.x_rec[i] = z[i] - z[inst.n + i];
  const double err = norm2(sub(inst.x_true, rec.x_rec));
  rec.mse = err / static_cast<double>(inst.n);
  rec.rel_err = err / norm2(inst.x_true);
  return rec;
}

BatchResult batch_experiment(std::size_t n, std::size_t m, std::size_t k,
                             double sigma, const std::vector<Method>& methods,
                             int reps, std::uint64_t seed0,
                             const std::map<Method, SolverConfig>& cfgs,
                             HScaling scaling,
                             std::optional<double> eta_override, int workers) {
  if (reps < 1) throw std::invalid_argument("batch_experiment: reps >= 1");
  if (methods.empty())
    throw std::invalid_argument("batch_experiment: no methods");

  auto cfg_for = [&](Method me) {
    const auto it = cfgs.find(me);
    return it != cfgs.end() ? it->second : default_cs_config(me);
  };
  for (Method me : methods) {
    const ValidationResult vr = validate_config(cfg_for(me), me);
    if (!vr.ok) throw std::invalid_argument("batch_experiment: " + vr.message);
  }

  BatchResult out;
  out.runs.resize(static_cast<std::size_t>(reps) * methods.size());

  const int nw = workers > 0 ? workers : worker_count();
  std::atomic<int> next{0};
  auto body = [&] {
    for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(r);
      const CsInstance inst =
          generate(n, m, k, sigma, seed, scaling, eta_override);
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const Method me = methods[mi];
        const Recovery rec = recover(inst, me, cfg_for(me));
        CsRun& run = out.runs[static_cast<std::size_t>(r) * methods.size() + mi];
        run.seed = seed;
        run.method = me;
        run.iters = rec.report.iterations;
        run.fevals = rec.report.fevals;
        run.time_s = rec.report.wall_time_s;
        run.mse = rec.mse;
        run.rel_err = rec.rel_err;
        run.status = to_string(rec.report.status);
      }
    }
  };
  if (nw == 1 || reps == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
  }

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    CsSummaryRow row;
    row.algorithm = to_string(methods[mi]);
    for (int r = 0; r < reps; ++r) {
      const CsRun& run = out.runs[static_cast<std::size_t>(r) * methods.size() + mi];
      row.iterations += run.iters;
      row.function_evals += static_cast<double>(run.fevals);
      row.time += run.time_s;
      row.mse += run.mse;
    }
    row.iterations /= reps;
    row.function_evals /= reps;
    row.time /= reps;
    row.mse /= reps;
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string cs_summary_csv(const std::vector<CsSummaryRow>& rows) {
  std::string out = "algorithm,iterations,function_evals,time,mse\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.1f,%.1f,%.4f,%.5e\n",
                  r.algorithm.c_str(), r.iterations, r.function_evals, r.time,
                  r.mse);
    out += buf;
  }
  return out;
}

void write_cs_summary_csv(const std::string& path,
                          const std::vector<CsSummaryRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << cs_summary_csv(rows);
}

std::string signals_csv(const CsInstance& inst,
                        const std::vector<std::pair<Method, Vec>>& recovered) {
  for (const auto& [me, x] : recovered)
    if (x.size() != inst.n)
      throw std::invalid_argument("signals_csv: recovered length mismatch");
  std::string out = "index,x_true,x_observed_backprojection";
  for (const auto& [me, x] : recovered)
    out += std::string(",x_recovered_") + to_string(me);
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < inst.n; ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g", i, inst.x_true[i],
                  inst.hty[i]);
    out += buf;
    for (const auto& [me, x] : recovered) {
      std::snprintf(buf, sizeof buf, ",%.10g", x[i]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void write_signals_csv(const std::string& path, const CsInstance& inst,
                       const std::vector<std::pair<Method, Vec>>& recovered) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << signals_csv(inst, recovered);
}

}  // namespace monsolve

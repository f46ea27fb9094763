#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "monsolve/problem.hpp"

namespace monsolve {

enum class HScaling { inv_sqrt_m, unit };

/// One synthetic sparse-recovery instance: y = H x_true + noise with a
/// k-sparse +-1 spike train, recast as the monotone system
/// G(z) = min(z, Qz + d) over z >= 0 in R^{2n}.
struct CsInstance {
  std::size_t n = 0;  // signal length
  std::size_t m = 0;  // measurements
  std::size_t k = 0;  // spikes
  std::vector<double> h;  // H, row-major m x n
  Vec y;                  // m observations
  Vec x_true;             // n, exactly k nonzeros
  Vec hty;                // H'y
  double eta = 0.0;       // l1 weight
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Draw order is fixed: H row-major, spike positions, spike signs, noise.
/// eta defaults to 0.01 * ||H'y||_inf unless overridden.
CsInstance generate(std::size_t n, std::size_t m, std::size_t k, double sigma,
                    std::uint64_t seed, HScaling scaling = HScaling::inv_sqrt_m,
                    std::optional<double> eta_override = std::nullopt);

/// G(z) = min(z, Qz + d), matrix-free: two applications of H per call.
void cs_residual(const Vec& z, const CsInstance& inst, Vec& out);

/// Dense 2n x 2n build of Q (row-major), for small-instance cross-checks.
std::vector<double> dense_cs_q(const CsInstance& inst);
/// d = (eta e - H'y; eta e + H'y).
Vec cs_d(const CsInstance& inst);

/// The instance as a Problem over the nonnegative orthant in R^{2n}.
Problem make_cs_problem(const CsInstance& inst);

/// Starting point (max(H'y, 0); max(-H'y, 0)), the positive/negative split
/// of the backprojection H'y.
Vec cs_start(const CsInstance& inst);

struct Recovery {
  Vec x_rec;  // z_1..n - z_{n+1}..2n
  SolveReport report;
  double mse = 0.0;      // ||x_true - x_rec|| / n
  double rel_err = 0.0;  // ||x_rec - x_true|| / ||x_true||
};

Recovery recover(const CsInstance& inst, Method method,
                 const SolverConfig& cfg);

struct CsRun {
  std::uint64_t seed = 0;
  Method method = Method::gmopcgm;
  int iters = 0;
  long long fevals = 0;
  double time_s = 0.0;
  double mse = 0.0;
  double rel_err = 0.0;
  std::string status;
};

struct CsSummaryRow {
  std::string algorithm;
  double iterations = 0.0;
  double function_evals = 0.0;
  double time = 0.0;
  double mse = 0.0;
};

struct BatchResult {
  std::vector<CsSummaryRow> rows;  // one per method, mean over reps
  std::vector<CsRun> runs;         // every (seed, method) run
};

/// reps instances with seeds seed0, seed0+1, ...; each method recovers each
/// instance. Means per method in rows.
BatchResult batch_experiment(std::size_t n, std::size_t m, std::size_t k,
                             double sigma, const std::vector<Method>& methods,
                             int reps, std::uint64_t seed0,
                             const std::map<Method, SolverConfig>& cfgs = {},
                             HScaling scaling = HScaling::inv_sqrt_m,
                             std::optional<double> eta_override = std::nullopt,
                             int workers = 0);

std::string cs_summary_csv(const std::vector<CsSummaryRow>& rows);
void write_cs_summary_csv(const std::string& path,
                          const std::vector<CsSummaryRow>& rows);

/// index,x_true,x_observed_backprojection,x_recovered_<method>... rows for
/// signal plots.
std::string signals_csv(const CsInstance& inst,
                        const std::vector<std::pair<Method, Vec>>& recovered);
void write_signals_csv(const std::string& path, const CsInstance& inst,
                       const std::vector<std::pair<Method, Vec>>& recovered);

}  // namespace monsolve

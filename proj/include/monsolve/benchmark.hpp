#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "monsolve/problem.hpp"
#include "monsolve/test_problems.hpp"

namespace monsolve {

struct RunRecord {
  std::string problem_id;
  int dim = 0;
  std::string x0_id;
  std::string solver_id;
  std::string status;
  int iters = 0;
  long long fevals = 0;
  double time_s = 0.0;
  double final_gnorm = 0.0;
};

struct SuiteSpec {
  std::vector<std::string> solvers;   // method names
  std::vector<std::string> problems;  // P01..P20 subset
  std::vector<std::size_t> dims;
  std::vector<std::string> x0s;
  std::map<std::string, SolverConfig> cfgs;  // per solver; defaults if absent
  RegistryOptions registry_opts;
  int workers = 0;  // 0 = worker_count()
};

/// One record per (problem, dim, x0, solver), sorted by that key. Run
/// failures (including per-run exceptions) are recorded, never dropped.
std::vector<RunRecord> run_suite(const SuiteSpec& spec);

/// Worker budget: SOLVER_THREADS when set (>= 1), else the hardware count.
int worker_count();

enum class Metric { iters, fevals, time };
Metric metric_from_string(const std::string& s);
const char* to_string(Metric m);

struct ProfileCurve {
  std::string solver_id;
  std::vector<std::pair<double, double>> points;  // (tau, rho), tau ascending
  double solve_fraction = 0.0;
};

/// Dolan-More profiles. Per (problem, dim, x0) tuple the metric is compared
/// against the best solver; failed runs receive twice the largest finite
/// ratio, beyond every sampled tau, so a curve tops out at its solver's
/// solve fraction. Metric floors keep ratios finite: iters >= 1,
/// time >= 1 ns.
std::vector<ProfileCurve> performance_profile(
    const std::vector<RunRecord>& records, Metric metric,
    const std::vector<std::string>& solvers);

enum class Sampler { grid, random };

struct StudySpec {
  Method solver = Method::gmopcgm;
  Sampler sampler = Sampler::grid;
  int budget = 50;
  double lo = 0.1;
  double hi = 10.0;
  std::vector<std::string> problems;
  std::vector<std::size_t> dims = {100};
  std::vector<std::string> x0s = {"x0_ones"};
  std::uint64_t seed = 1;
  int workers = 0;
};

struct StudyRow {
  double tau = 0.0;
  double lambda0 = 0.0;
  double objective = 0.0;  // total fevals, failures charged 3*max_iter each
  std::map<std::string, int> status_counts;
};

/// (tau, lambda0) sweep. grid: floor(sqrt(budget))^2 lattice over the square;
/// random: budget seeded uniform pairs.
std::vector<StudyRow> parameter_study(const StudySpec& spec);

// CSV in the documented layouts.
std::string records_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_records_csv(const std::string& text);
void write_records_csv(const std::string& path,
                       const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(const std::string& path);

std::string profile_csv(const std::vector<ProfileCurve>& curves);
/// gnuplot companion: one indexed block per solver, "tau rho" pairs.
std::string profile_dat(const std::vector<ProfileCurve>& curves);
void write_profile_csv(const std::string& path,
                       const std::vector<ProfileCurve>& curves);
void write_profile_dat(const std::string& path,
                       const std::vector<ProfileCurve>& curves);

std::string study_csv(const std::vector<StudyRow>& rows);
void write_study_csv(const std::string& path,
                     const std::vector<StudyRow>& rows);

}  // namespace monsolve

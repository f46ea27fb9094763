#include "monsolve/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "monsolve/rng.hpp"
#include "monsolve/solver.hpp"

namespace monsolve {

int worker_count() {
  if (const char* env = std::getenv("SOLVER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace {

bool is_success(const std::string& status) {
  return status == "converged_on_x" || status == "converged_on_z";
}

struct Task {
  std::string problem;
  std::size_t dim = 0;
  std::string x0;
  std::string solver;
};

void run_pool(std::size_t n_tasks, int workers,
              const std::function<void(std::size_t)>& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n_tasks <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next.fetch_add(1); i < n_tasks;
         i = next.fetch_add(1))
      body(i);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<RunRecord> run_suite(const SuiteSpec& spec) {
  if (spec.solvers.empty() || spec.problems.empty() || spec.dims.empty() ||
      spec.x0s.empty())
    throw std::invalid_argument("run_suite: empty axis");

  std::map<std::string, SolverConfig> cfgs;
  for (const auto& s : spec.solvers) {
    const Method m = method_from_string(s);
    const auto it = spec.cfgs.find(s);
    const SolverConfig cfg = it != spec.cfgs.end() ? it->second
                                                   : default_config(m);
    const ValidationResult vr = validate_config(cfg, m);
    if (!vr.ok) throw std::invalid_argument("run_suite: " + vr.message);
    cfgs[s] = cfg;
  }

  std::vector<Task> tasks;
  std::set<std::string> seen;
  for (const auto& p : spec.problems)
    for (const auto d : spec.dims)
      for (const auto& x : spec.x0s)
        for (const auto& s : spec.solvers) {
          const std::string key = p + "|" + std::to_string(d) + "|" + x +
                                  "|" + s;
          if (!seen.insert(key).second)
            throw std::invalid_argument("run_suite: duplicate tuple " + key);
          tasks.push_back({p, d, x, s});
        }

  std::vector<RunRecord> records(tasks.size());
  const int workers = spec.workers > 0 ? spec.workers : worker_count();
  run_pool(tasks.size(), workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    RunRecord& r = records[i];
    r.problem_id = t.problem;
    r.dim = static_cast<int>(t.dim);
    r.x0_id = t.x0;
    r.solver_id = t.solver;
    try {
      const Problem prob = make_problem(t.problem, t.dim, spec.registry_opts);
      const Vec x0 = initial_point(t.x0, t.dim);
      const SolveReport rep =
          solve(prob, x0, method_from_string(t.solver), cfgs.at(t.solver));
      r.status = to_string(rep.status);
      r.iters = rep.iterations;
      r.fevals = rep.fevals;
      r.time_s = rep.wall_time_s;
      r.final_gnorm = rep.final_gnorm;
    } catch (const std::exception&) {
      r.status = "error";
      r.final_gnorm = std::numeric_limits<double>::quiet_NaN();
    }
  });

  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return std::tie(a.problem_id, a.dim, a.x0_id, a.solver_id) <
                     std::tie(b.problem_id, b.dim, b.x0_id, b.solver_id);
            });
  return records;
}

Metric metric_from_string(const std::string& s) {
  if (s == "iters") return Metric::iters;
  if (s == "fevals") return Metric::fevals;
  if (s == "time") return Metric::time;
  throw std::invalid_argument("unknown metric: '" + s +
                              "' (expected iters, fevals or time)");
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::iters: return "iters";
    case Metric::fevals: return "fevals";
    case Metric::time: return "time";
  }
  return "?";
}

std::vector<ProfileCurve> performance_profile(
    const std::vector<RunRecord>& records, Metric metric,
    const std::vector<std::string>& solvers) {
  if (records.empty())
    throw std::invalid_argument("performance_profile: empty record set");
  if (solvers.empty())
    throw std::invalid_argument("performance_profile: no solvers");

  auto metric_of = [&](const RunRecord& r) -> double {
    if (!is_success(r.status)) return std::numeric_limits<double>::infinity();
    switch (metric) {
      case Metric::iters: return std::max(1.0, static_cast<double>(r.iters));
      case Metric::fevals: return std::max(1.0, static_cast<double>(r.fevals));
      case Metric::time: return std::max(1e-9, r.time_s);
    }
    return std::numeric_limits<double>::infinity();
  };

  std::map<std::string, std::size_t> solver_ix;
  for (std::size_t i = 0; i < solvers.size(); ++i) solver_ix[solvers[i]] = i;

  // (problem, dim, x0) -> per-solver metric
  std::map<std::string, std::vector<double>> tuples;
  for (const auto& r : records) {
    const auto it = solver_ix.find(r.solver_id);
    if (it == solver_ix.end()) continue;
    const std::string key =
        r.problem_id + "|" + std::to_string(r.dim) + "|" + r.x0_id;
    auto& row = tuples[key];
    if (row.empty())
      row.assign(solvers.size(), std::numeric_limits<double>::quiet_NaN());
    row[it->second] = metric_of(r);
  }
  for (const auto& [key, row] : tuples)
    for (double v : row)
      if (std::isnan(v))
        throw std::invalid_argument(
            "performance_profile: tuple " + key +
            " lacks a record for some requested solver");

  const std::size_t np = tuples.size();
  std::vector<std::vector<double>> ratios(solvers.size());
  double max_finite = 1.0;
  for (const auto& [key, row] : tuples) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : row) best = std::min(best, v);
    for (std::size_t s = 0; s < row.size(); ++s) {
      const double r = std::isinf(best) ? std::numeric_limits<double>::infinity()
                                        : row[s] / best;
      ratios[s].push_back(r);
      if (std::isfinite(r)) max_finite = std::max(max_finite, r);
    }
  }
  // Failures land on a cap strictly beyond every finite ratio; the curves
  // are sampled at the finite ratios only, so a failed run never counts as
  // solved at any sampled tau.
  const double cap = 2.0 * max_finite;
  std::set<double> tau_set{1.0};
  for (auto& rs : ratios)
    for (auto& r : rs) {
      if (std::isinf(r)) r = cap;
      else tau_set.insert(r);
    }

  std::vector<ProfileCurve> curves;
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    ProfileCurve c;
    c.solver_id = solvers[s];
    std::vector<double> sorted = ratios[s];
    std::sort(sorted.begin(), sorted.end());
    std::size_t solved = 0;
    for (double r : sorted)
      if (r < cap) ++solved;
    c.solve_fraction = static_cast<double>(solved) / static_cast<double>(np);
    for (double tau : tau_set) {
      const auto cnt = std::upper_bound(sorted.begin(), sorted.end(), tau) -
                       sorted.begin();
      c.points.emplace_back(tau,
                            static_cast<double>(cnt) / static_cast<double>(np));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<StudyRow> parameter_study(const StudySpec& spec) {
  if (spec.budget < 1) throw std::invalid_argument("parameter_study: budget >= 1");
  if (!(spec.lo <= spec.hi))
    throw std::invalid_argument("parameter_study: inverted bounds");
  if (spec.solver != Method::gmopcgm && spec.solver != Method::gcgpm)
    throw std::invalid_argument(
        "parameter_study: adaptive solvers only (gmopcgm, gcgpm)");

  std::vector<std::pair<double, double>> samples;
  if (spec.sampler == Sampler::grid) {
    const int m = std::max(1, static_cast<int>(std::floor(std::sqrt(
                                  static_cast<double>(spec.budget)))));
    auto coord = [&](int i) {
      return m == 1 ? 0.5 * (spec.lo + spec.hi)
                    : spec.lo + (spec.hi - spec.lo) * i / (m - 1.0);
    };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) samples.emplace_back(coord(i), coord(j));
  } else {
    Rng rng(spec.seed);
    for (int i = 0; i < spec.budget; ++i) {
      const double tau = rng.uniform(spec.lo, spec.hi);
      const double l0 = rng.uniform(spec.lo, spec.hi);
      samples.emplace_back(tau, l0);
    }
  }

  const std::vector<std::string> problems =
      spec.problems.empty() ? problem_ids() : spec.problems;

  struct Cell {
    std::string problem;
    std::size_t dim;
    std::string x0;
  };
  std::vector<Cell> cells;
  for (const auto& p : problems)
    for (const auto d : spec.dims)
      for (const auto& x : spec.x0s) cells.push_back({p, d, x});

  std::vector<StudyRow> rows(samples.size());
  struct TaskResult {
    std::string status;
    long long fevals = 0;
    int max_iter = 0;
  };
  std::vector<TaskResult> results(samples.size() * cells.size());

  const int workers = spec.workers > 0 ? spec.workers : worker_count();
  run_pool(results.size(), workers, [&](std::size_t ix) {
    const std::size_t si = ix / cells.size();
    const Cell& cell = cells[ix % cells.size()];
    SolverConfig cfg = default_config(spec.solver);
    cfg.tau = samples[si].first;
    cfg.lambda0 = samples[si].second;
    // The three-term direction needs lambda bounded below by (1+tau)/2 for
    // its descent guarantee; lift the clamp interval when the sampled tau
    // exceeds what the default interval can honor.
    if (spec.solver == Method::gcgpm) {
      cfg.alpha_min = std::max(cfg.alpha_min, 0.5 * (1.0 + cfg.tau));
      cfg.alpha_max = std::max(cfg.alpha_max, cfg.alpha_min);
    }
    TaskResult& out = results[ix];
    out.max_iter = cfg.max_iter;
    try {
      const Problem prob = make_problem(cell.problem, cell.dim);
      const Vec x0 = initial_point(cell.x0, cell.dim);
      const SolveReport rep = solve(prob, x0, spec.solver, cfg);
      out.status = to_string(rep.status);
      out.fevals = rep.fevals;
    } catch (const std::exception&) {
      out.status = "error";
    }
  });

  for (std::size_t si = 0; si < samples.size(); ++si) {
    StudyRow& row = rows[si];
    row.tau = samples[si].first;
    row.lambda0 = samples[si].second;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
      const TaskResult& tr = results[si * cells.size() + ci];
      row.objective += static_cast<double>(tr.fevals);
      if (!is_success(tr.status)) row.objective += 3.0 * tr.max_iter;
      ++row.status_counts[tr.status];
    }
  }
  return rows;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

constexpr const char* kRecordsHeader =
    "problem,dim,x0,solver,status,iters,fevals,time_s,final_gnorm";

}  // namespace

std::string records_csv(const std::vector<RunRecord>& records) {
  std::string out = kRecordsHeader;
  out += "\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%s,%s,%d,%lld,%.6f,%.5e\n",
                  r.problem_id.c_str(), r.dim, r.x0_id.c_str(),
                  r.solver_id.c_str(), r.status.c_str(), r.iters, r.fevals,
                  r.time_s, r.final_gnorm);
    out += buf;
  }
  return out;
}

std::vector<RunRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader)
    throw std::runtime_error("results CSV: bad or missing header");
  std::vector<RunRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9)
      throw std::runtime_error("results CSV line " + std::to_string(lineno) +
                               ": expected 9 fields");
    RunRecord r;
    try {
      r.problem_id = f[0];
      r.dim = std::stoi(f[1]);
      r.x0_id = f[2];
      r.solver_id = f[3];
      r.status = f[4];
      r.iters = std::stoi(f[5]);
      r.fevals = std::stoll(f[6]);
      r.time_s = std::stod(f[7]);
      r.final_gnorm = std::stod(f[8]);
    } catch (const std::exception&) {
      throw std::runtime_error("results CSV line " + std::to_string(lineno) +
                               ": malformed field");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_records_csv(const std::string& path,
                       const std::vector<RunRecord>& records) {
  write_file(path, records_csv(records));
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  return parse_records_csv(read_file(path));
}

std::string profile_csv(const std::vector<ProfileCurve>& curves) {
  std::string out = "solver,tau,rho\n";
  for (const auto& c : curves)
    for (const auto& [tau, rho] : c.points)
      out += c.solver_id + "," + fmt("%.10g", tau) + "," + fmt("%.10g", rho) +
             "\n";
  return out;
}

std::string profile_dat(const std::vector<ProfileCurve>& curves) {
  std::string out;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i) out += "\n\n";
    out += "# solver: " + curves[i].solver_id + "\n";
    for (const auto& [tau, rho] : curves[i].points)
      out += fmt("%.10g", tau) + " " + fmt("%.10g", rho) + "\n";
  }
  return out;
}

void write_profile_csv(const std::string& path,
                       const std::vector<ProfileCurve>& curves) {
  write_file(path, profile_csv(curves));
}

void write_profile_dat(const std::string& path,
                       const std::vector<ProfileCurve>& curves) {
  write_file(path, profile_dat(curves));
}

std::string study_csv(const std::vector<StudyRow>& rows) {
  std::string out = "tau,lambda0,objective,status_counts\n";
  for (const auto& r : rows) {
    std::string counts;
    for (const auto& [k, v] : r.status_counts) {
      if (!counts.empty()) counts += "|";
      counts += k + ":" + std::to_string(v);
    }
    out += fmt("%.10g", r.tau) + "," + fmt("%.10g", r.lambda0) + "," +
           fmt("%.10g", r.objective) + "," + counts + "\n";
  }
  return out;
}

void write_study_csv(const std::string& path,
                     const std::vector<StudyRow>& rows) {
  write_file(path, study_csv(rows));
}

}  // namespace monsolve

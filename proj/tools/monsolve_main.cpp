// Command-line front end: solve, bench, profile, cs, verify-spectral, tune.
// Exit codes: 0 success/converged, 1 usage or I/O error, 2 non-convergence
// (or a failed verification suite).

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "monsolve/benchmark.hpp"
#include "monsolve/compressed_sensing.hpp"
#include "monsolve/problem.hpp"
#include "monsolve/solver.hpp"
#include "monsolve/spectral.hpp"
#include "monsolve/test_problems.hpp"

namespace {

using namespace monsolve;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(tok.substr(b, e - b + 1));
  }
  if (out.empty()) throw std::runtime_error("empty list: '" + s + "'");
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& tok : split_list(s)) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != tok.size() || v == 0)
      throw std::runtime_error("malformed dims list: '" + tok + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<Method> parse_methods(const std::string& s) {
  std::vector<Method> out;
  for (const auto& tok : split_list(s)) out.push_back(method_from_string(tok));
  return out;
}

// Solver parameters shared by every solving subcommand. Defaults come from
// the per-method parameter set; a --config file overrides those and explicit
// flags override both.
struct CfgFlags {
  SolverConfig vals;
  std::string config_path;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "parameter file (key=value lines, # comments)");
    opts["tau"] = cmd->add_option("--tau", vals.tau, "direction mixing weight");
    opts["rho"] = cmd->add_option("--rho", vals.rho, "backtracking factor");
    opts["beta"] = cmd->add_option("--beta", vals.beta, "initial step length");
    opts["zeta"] =
        cmd->add_option("--zeta", vals.zeta, "sufficient-decrease factor");
    opts["zeta1"] =
        cmd->add_option("--zeta1", vals.zeta1, "residual clamp floor");
    opts["zeta2"] =
        cmd->add_option("--zeta2", vals.zeta2, "residual clamp ceiling");
    opts["alpha_min"] =
        cmd->add_option("--alpha-min", vals.alpha_min, "scaling clamp, lower");
    opts["alpha_max"] =
        cmd->add_option("--alpha-max", vals.alpha_max, "scaling clamp, upper");
    opts["lambda0"] =
        cmd->add_option("--lambda0", vals.lambda0, "initial/reset scaling");
    opts["gamma"] =
        cmd->add_option("--gamma", vals.gamma, "projection relaxation");
    opts["gamma1"] =
        cmd->add_option("--gamma1", vals.gamma1, "relaxation growth factor");
    opts["gamma2"] =
        cmd->add_option("--gamma2", vals.gamma2, "relaxation growth cap");
    opts["gamma3"] =
        cmd->add_option("--gamma3", vals.gamma3, "relaxation decay factor");
    opts["gamma4"] =
        cmd->add_option("--gamma4", vals.gamma4, "relaxation decay floor");
    opts["tol"] = cmd->add_option("--tol", vals.tol, "stop when ||G|| < tol");
    opts["max_iter"] =
        cmd->add_option("--max-iter", vals.max_iter, "iteration budget");
    opts["max_backtracks"] = cmd->add_option(
        "--max-backtracks", vals.max_backtracks, "line-search trial budget");
  }

  SolverConfig resolve(Method m, bool cs_defaults) const {
    SolverConfig cfg = cs_defaults ? default_cs_config(m) : default_config(m);
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    auto set = [&](const char* key, auto SolverConfig::* field) {
      const auto it = opts.find(key);
      if (it != opts.end() && it->second->count() > 0) cfg.*field = vals.*field;
    };
    set("tau", &SolverConfig::tau);
    set("rho", &SolverConfig::rho);
    set("beta", &SolverConfig::beta);
    set("zeta", &SolverConfig::zeta);
    set("zeta1", &SolverConfig::zeta1);
    set("zeta2", &SolverConfig::zeta2);
    set("alpha_min", &SolverConfig::alpha_min);
    set("alpha_max", &SolverConfig::alpha_max);
    set("lambda0", &SolverConfig::lambda0);
    set("gamma", &SolverConfig::gamma);
    set("gamma1", &SolverConfig::gamma1);
    set("gamma2", &SolverConfig::gamma2);
    set("gamma3", &SolverConfig::gamma3);
    set("gamma4", &SolverConfig::gamma4);
    set("tol", &SolverConfig::tol);
    set("max_iter", &SolverConfig::max_iter);
    set("max_backtracks", &SolverConfig::max_backtracks);
    return cfg;
  }
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << text;
}

struct SolveArgs {
  std::string problem;
  std::size_t n = 1000;
  std::string x0 = "ones";
  std::string solver = "gmopcgm";
  std::string trace_path;
  bool classic_trigexp = false;
  CfgFlags cfg;
};

int cmd_solve(const SolveArgs& a) {
  const Method m = method_from_string(a.solver);
  RegistryOptions ro;
  ro.classic_trigexp = a.classic_trigexp;
  const Problem prob = make_problem(a.problem, a.n, ro);
  const Vec x0 = initial_point(a.x0, a.n);
  SolveHooks hooks;
  hooks.record_trace = !a.trace_path.empty();
  const SolveReport rep = solve(prob, x0, m, a.cfg.resolve(m, false), hooks);
  std::printf("status: %s\n", to_string(rep.status));
  std::printf("iterations: %d\n", rep.iterations);
  std::printf("fevals: %lld\n", rep.fevals);
  std::printf("time_s: %.6f\n", rep.wall_time_s);
  std::printf("final_gnorm: %.5e\n", rep.final_gnorm);
  if (!a.trace_path.empty()) {
    std::string text = "k,gnorm,alpha,backtracks,lambda,gamma,pnorm\n";
    char buf[256];
    for (const auto& r : rep.trace) {
      std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%d,%.10g,%.10g,%.10e\n",
                    r.k, r.gnorm, r.alpha, r.backtracks, r.lambda, r.gamma,
                    r.pnorm);
      text += buf;
    }
    write_text_file(a.trace_path, text);
    std::printf("wrote %zu trace rows to %s\n", rep.trace.size(),
                a.trace_path.c_str());
  }
  return rep.converged() ? 0 : 2;
}

struct BenchArgs {
  std::string suite = "desk";
  bool desk = false;
  std::string problems, dims, x0s, solvers;
  std::string out;
  int workers = 0;
  bool classic_trigexp = false;
  CfgFlags cfg;
};

int cmd_bench(const BenchArgs& a) {
  SuiteSpec spec;
  spec.problems = problem_ids();
  if (a.suite == "full") {
    spec.dims = benchmark_dimensions();
    spec.x0s = initial_point_ids();
  } else {
    spec.dims = desk_dimensions();
    spec.x0s = {"x0_zero", "x0_05", "x0_ones", "x0_harmonic", "x0_k_over_m"};
  }
  for (Method m : all_methods()) spec.solvers.push_back(to_string(m));
  if (!a.problems.empty()) spec.problems = split_list(a.problems);
  if (!a.dims.empty()) spec.dims = parse_dims(a.dims);
  if (a.desk) spec.dims = desk_dimensions();
  if (!a.x0s.empty()) spec.x0s = split_list(a.x0s);
  if (!a.solvers.empty()) spec.solvers = split_list(a.solvers);
  for (const auto& s : spec.solvers)
    spec.cfgs[s] = a.cfg.resolve(method_from_string(s), false);
  spec.registry_opts.classic_trigexp = a.classic_trigexp;
  spec.workers = a.workers;

  const auto records = run_suite(spec);
  write_records_csv(a.out, records);
  std::size_t solved = 0;
  for (const auto& r : records)
    if (r.status == "converged_on_x" || r.status == "converged_on_z") ++solved;
  std::printf("wrote %zu records to %s (%zu solved)\n", records.size(),
              a.out.c_str(), solved);
  return 0;
}

struct ProfileArgs {
  std::string in;
  std::string metric = "fevals";
  std::string out;
  std::string dat;
  std::string solvers;
};

int cmd_profile(const ProfileArgs& a) {
  const auto records = read_records_csv(a.in);
  std::vector<std::string> solvers;
  if (!a.solvers.empty()) {
    solvers = split_list(a.solvers);
  } else {
    std::set<std::string> seen;
    for (const auto& r : records) seen.insert(r.solver_id);
    solvers.assign(seen.begin(), seen.end());
  }
  const auto curves =
      performance_profile(records, metric_from_string(a.metric), solvers);
  write_profile_csv(a.out, curves);
  if (!a.dat.empty()) write_profile_dat(a.dat, curves);
  std::printf("wrote %zu curves to %s\n", curves.size(), a.out.c_str());
  for (const auto& c : curves)
    std::printf("  %s: solve fraction %.4f\n", c.solver_id.c_str(),
                c.solve_fraction);
  return 0;
}

struct CsArgs {
  std::size_t n = 1024, m = 512, k = 64;
  double sigma = 0.01;
  std::uint64_t seed = 7;
  int reps = 1;
  std::string methods = "gmopcgm,mopcgm,gcgpm,cgpm";
  std::string out;
  std::string signals;
  double eta = 0.0;
  CLI::Option* eta_opt = nullptr;
  std::string h_scaling = "inv-sqrt-m";
  int workers = 0;
  CfgFlags cfg;
};

int cmd_cs(const CsArgs& a) {
  const std::vector<Method> methods = parse_methods(a.methods);
  std::map<Method, SolverConfig> cfgs;
  for (Method m : methods) cfgs[m] = a.cfg.resolve(m, true);
  const HScaling sc =
      a.h_scaling == "unit" ? HScaling::unit : HScaling::inv_sqrt_m;
  std::optional<double> eta;
  if (a.eta_opt != nullptr && a.eta_opt->count() > 0) eta = a.eta;

  const BatchResult res = batch_experiment(a.n, a.m, a.k, a.sigma, methods,
                                           a.reps, a.seed, cfgs, sc, eta,
                                           a.workers);
  write_cs_summary_csv(a.out, res.rows);
  std::printf("wrote %zu summary rows (%d reps each) to %s\n", res.rows.size(),
              a.reps, a.out.c_str());
  if (!a.signals.empty()) {
    const CsInstance inst = generate(a.n, a.m, a.k, a.sigma, a.seed, sc, eta);
    std::vector<std::pair<Method, Vec>> rec;
    for (Method m : methods)
      rec.emplace_back(m, recover(inst, m, cfgs.at(m)).x_rec);
    write_signals_csv(a.signals, inst, rec);
    std::printf("wrote signal columns to %s\n", a.signals.c_str());
  }
  for (const auto& run : res.runs)
    if (run.status != "converged_on_x" && run.status != "converged_on_z")
      return 2;
  return 0;
}

struct SpectralArgs {
  int n = 0;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_verify_spectral(const SpectralArgs& a) {
  const SuiteReport rep = run_spectral_suite(a.trials, a.seed, a.n);
  std::fputs(suite_report_text(rep).c_str(), stdout);
  if (!a.out.empty()) {
    write_text_file(a.out, suite_csv(a.trials, a.seed, a.n));
    std::printf("wrote per-case rows to %s\n", a.out.c_str());
  }
  return rep.ok() ? 0 : 2;
}

struct TuneArgs {
  std::string solver;
  std::string sampler = "grid";
  int budget = 50;
  double lo = 0.1, hi = 10.0;
  std::string problems, dims = "100", x0s = "x0_ones";
  std::uint64_t seed = 1;
  std::string out;
  int workers = 0;
};

int cmd_tune(const TuneArgs& a) {
  StudySpec sp;
  sp.solver = method_from_string(a.solver);
  sp.sampler = a.sampler == "random" ? Sampler::random : Sampler::grid;
  sp.budget = a.budget;
  sp.lo = a.lo;
  sp.hi = a.hi;
  if (!a.problems.empty()) sp.problems = split_list(a.problems);
  sp.dims = parse_dims(a.dims);
  sp.x0s = split_list(a.x0s);
  sp.seed = a.seed;
  sp.workers = a.workers;
  const auto rows = parameter_study(sp);
  write_study_csv(a.out, rows);
  const StudyRow* best = &rows.front();
  for (const auto& r : rows)
    if (r.objective < best->objective) best = &r;
  std::printf("wrote %zu samples to %s; best tau=%.6g lambda0=%.6g "
              "objective=%.0f\n",
              rows.size(), a.out.c_str(), best->tau, best->lambda0,
              best->objective);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Derivative-free projection solvers for large monotone equations "
      "with convex constraints"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd =
      app.add_subcommand("solve", "run one solver on one registry problem");
  solve_cmd->add_option("--problem", sa.problem, "problem id, P01..P20")
      ->required();
  solve_cmd->add_option("--n", sa.n, "problem dimension (>= 2)");
  solve_cmd->add_option("--x0", sa.x0, "initial point id (x0_ prefix optional)");
  solve_cmd->add_option("--solver", sa.solver,
                        "gmopcgm | mopcgm | gcgpm | cgpm");
  solve_cmd->add_option("--trace", sa.trace_path, "write per-iteration CSV");
  solve_cmd->add_flag("--classic-trigexp", sa.classic_trigexp,
                      "use the classical Trigexp interior term for P09");
  sa.cfg.attach(solve_cmd);

  BenchArgs ba;
  auto* bench_cmd =
      app.add_subcommand("bench", "run a problem/dimension/x0/solver grid");
  bench_cmd->add_option("--suite", ba.suite,
                        "desk (n<=1000, 5 starts) | full (n<=50000, all 14)")
      ->check(CLI::IsMember({"desk", "full"}));
  bench_cmd->add_flag("--desk", ba.desk, "shortcut: dims 100,1000");
  bench_cmd->add_option("--problems", ba.problems, "comma list, default all");
  bench_cmd->add_option("--dims", ba.dims, "comma list of dimensions");
  bench_cmd->add_option("--x0s", ba.x0s, "comma list of initial point ids");
  bench_cmd->add_option("--solvers", ba.solvers, "comma list of methods");
  bench_cmd->add_option("--out", ba.out, "records CSV path")->required();
  bench_cmd->add_option("--workers", ba.workers,
                        "thread count, 0 = SOLVER_THREADS or hardware");
  bench_cmd->add_flag("--classic-trigexp", ba.classic_trigexp,
                      "use the classical Trigexp interior term for P09");
  ba.cfg.attach(bench_cmd);

  ProfileArgs pa;
  auto* prof_cmd = app.add_subcommand(
      "profile", "performance profile curves from a records CSV");
  prof_cmd->add_option("--in", pa.in, "records CSV from bench")->required();
  prof_cmd->add_option("--metric", pa.metric, "iters | fevals | time")
      ->check(CLI::IsMember({"iters", "fevals", "time"}));
  prof_cmd->add_option("--out", pa.out, "curves CSV path")->required();
  prof_cmd->add_option("--dat", pa.dat, "also write gnuplot-style blocks");
  prof_cmd->add_option("--solvers", pa.solvers,
                       "comma list, default every solver in the file");

  CsArgs ca;
  auto* cs_cmd = app.add_subcommand(
      "cs", "sparse-signal recovery experiment (min(z, Qz+d) = 0)");
  cs_cmd->add_option("--n", ca.n, "signal length");
  cs_cmd->add_option("--m", ca.m, "measurement count (k < m < n)");
  cs_cmd->add_option("--k", ca.k, "spike count");
  cs_cmd->add_option("--sigma", ca.sigma, "noise standard deviation");
  cs_cmd->add_option("--seed", ca.seed, "instance seed (rep r uses seed + r)");
  cs_cmd->add_option("--reps", ca.reps, "independent instances to average");
  cs_cmd->add_option("--method", ca.methods, "comma list of methods");
  cs_cmd->add_option("--out", ca.out, "summary CSV path")->required();
  cs_cmd->add_option("--signals", ca.signals,
                     "per-index signal CSV for the first instance");
  ca.eta_opt = cs_cmd->add_option("--eta", ca.eta,
                                  "l1 weight, default 0.01*max|H'y|");
  cs_cmd->add_option("--h-scaling", ca.h_scaling, "inv-sqrt-m | unit")
      ->check(CLI::IsMember({"inv-sqrt-m", "unit"}));
  cs_cmd->add_option("--workers", ca.workers,
                     "thread count, 0 = SOLVER_THREADS or hardware");
  ca.cfg.attach(cs_cmd);

  SpectralArgs va;
  auto* ver_cmd = app.add_subcommand(
      "verify-spectral", "randomized checks of the scaling-matrix algebra");
  ver_cmd->add_option("--n", va.n, "fixed case dimension, 0 = mixed 3..10");
  ver_cmd->add_option("--trials", va.trials, "number of random cases");
  ver_cmd->add_option("--seed", va.seed, "generator seed");
  ver_cmd->add_option("--out", va.out, "per-case CSV path");

  TuneArgs ta;
  auto* tune_cmd =
      app.add_subcommand("tune", "(tau, lambda0) parameter sweep");
  tune_cmd->add_option("--solver", ta.solver, "gmopcgm | gcgpm")->required();
  tune_cmd->add_option("--sampler", ta.sampler, "grid | random")
      ->check(CLI::IsMember({"grid", "random"}));
  tune_cmd->add_option("--budget", ta.budget, "sample budget");
  tune_cmd->add_option("--lo", ta.lo, "lower bound for tau and lambda0");
  tune_cmd->add_option("--hi", ta.hi, "upper bound for tau and lambda0");
  tune_cmd->add_option("--problems", ta.problems, "comma list, default all");
  tune_cmd->add_option("--dims", ta.dims, "comma list of dimensions");
  tune_cmd->add_option("--x0s", ta.x0s, "comma list of initial point ids");
  tune_cmd->add_option("--seed", ta.seed, "sampler seed (random only)");
  tune_cmd->add_option("--out", ta.out, "study CSV path")->required();
  tune_cmd->add_option("--workers", ta.workers,
                       "thread count, 0 = SOLVER_THREADS or hardware");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(sa);
    if (bench_cmd->parsed()) return cmd_bench(ba);
    if (prof_cmd->parsed()) return cmd_profile(pa);
    if (cs_cmd->parsed()) return cmd_cs(ca);
    if (ver_cmd->parsed()) return cmd_verify_spectral(va);
    if (tune_cmd->parsed()) return cmd_tune(ta);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

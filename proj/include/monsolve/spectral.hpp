#pragma once

#include <cstdint>
#include <string>

#include "monsolve/linalg.hpp"
#include "monsolve/rng.hpp"

namespace monsolve {

/// One instance of the memoryless secant model matrix
///   Q = lambda I - lambda (y s' + s y') / (2 y's) + t s s' / (y's),
/// the object behind the Perry-type direction. Requires s'y > 0.
struct SpectralCase {
  int n = 0;
  Vec s;
  Vec y;
  double lambda = 1.0;
  double t = 1.0;
};

/// Random case with s'y > 0, angle between s and y bounded away from both
/// 0 and 90 degrees so every derived quantity is well scaled.
/// n = 0 draws the dimension uniformly from {3,...,10}.
SpectralCase make_spectral_case(Rng& rng, int n = 0);

/// a = ||s||^2 / s'y
double shape_a(const SpectralCase& c);
/// b = ||s|| ||y|| / s'y  (b >= 1 by Cauchy-Schwarz)
double shape_b(const SpectralCase& c);

/// Scaling that makes the two non-trivial eigenvalues coincide:
/// t* = lambda s'y / ||s||^2.
double optimal_t(const SpectralCase& c);

/// The matrix is positive definite exactly when t exceeds
/// lambda (b^2 - 1) / (4a).
double pd_threshold(const SpectralCase& c);

/// Dense n x n row-major build of Q.
std::vector<double> dense_q(const SpectralCase& c);

/// Eigenvalues of a symmetric matrix (row-major, destroyed), ascending.
/// Cyclic Jacobi; intended for the small dense checks here.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n);

/// All checks for one case, each as a relative deviation or a flag.
struct CaseChecks {
  double b2 = 0.0;            // b^2
  double trace_dev = 0.0;     // |trace - (lambda(n-1) + t a)| / max(1,|rhs|)
  double fro_dev = 0.0;       // Frobenius identity deviation
  double sum_dev = 0.0;       // eigen pair sum vs lambda + a t
  double prod_dev = 0.0;      // eigen pair product vs lambda^2(1-b^2)/4 + lambda a t
  bool mult_ok = false;       // n-2 eigenvalues sit at lambda
  bool pair_resolved = false; // predicted pair separated from lambda, count is exact
  bool argmin_ok = false;     // grid argmin of (eta+ - eta-)^2 brackets t*
  bool pd_above_tested = false;
  bool pd_above_ok = false;   // min eigenvalue > 0 just above the threshold
  bool npd_tested = false;
  bool npd_ok = false;        // min eigenvalue < 0 just below it (b^2 > 1 only)
  bool pd_at_tstar = false;   // the blanket claim; holds iff b^2 < 5
  bool pd_at_tstar_consistent = false;  // pd_at_tstar == (b^2 < 5), margin aside
};

CaseChecks run_case_checks(const SpectralCase& c);

struct SuiteReport {
  int trials = 0;
  double max_trace_dev = 0.0;
  double max_fro_dev = 0.0;
  double max_sum_dev = 0.0;
  double max_prod_dev = 0.0;
  int mult_fail = 0;
  int argmin_fail = 0;
  int pd_above_tested = 0;
  int pd_above_fail = 0;
  int npd_tested = 0;
  int npd_pass = 0;
  int tstar_consistency_fail = 0;
  int b2_below_5 = 0;        // cases where the blanket PD-at-t* claim applies
  int pd_at_tstar_hold = 0;  // cases where it actually held
  double tol = 1e-8;

  bool ok() const;
};

SuiteReport run_spectral_suite(int trials, std::uint64_t seed, int fixed_n = 0);

std::string suite_report_text(const SuiteReport& r);

/// Per-case CSV rows (with header) for external inspection.
std::string suite_csv(int trials, std::uint64_t seed, int fixed_n = 0);

}  // namespace monsolve

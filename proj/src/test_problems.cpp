#include "monsolve/test_problems.hpp"

#include <cmath>
#include <stdexcept>

namespace monsolve {

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi) {
  double flo = f(lo), fhi = f(hi);
  if (!(flo * fhi < 0.0))
    throw std::invalid_argument("bisect_root: no sign change on bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-14 * std::max(1.0, std::fabs(mid))) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::string> problem_ids() {
  std::vector<std::string> ids;
  char buf[8];
  for (int i = 1; i <= 20; ++i) {
    std::snprintf(buf, sizeof buf, "P%02d", i);
    ids.emplace_back(buf);
  }
  return ids;
}

namespace {

Vec const_vec(std::size_t n, double v) { return Vec(n, v); }

// Constant-vector roots of the componentwise systems, each pinned down by a
// scalar bisection at construction time.
double root_p06() {
  return bisect_root([](double c) { return c + std::sin(c) - 1.0; }, 0.0, 1.0);
}
double root_p12() {
  return bisect_root(
      [](double c) { return c - std::sin(std::fabs(c - 1.0)); }, 0.0, 1.0);
}
double root_p13() {
  return bisect_root(
      [](double c) { return 2.0 * c - std::sin(std::fabs(c - 1.0)); }, 0.0,
      1.0);
}
double root_p14() {
  return bisect_root(
      [](double c) { return c - 2.0 * std::sin(std::fabs(c - 1.0)); }, 0.0,
      1.0);
}
double p18_scalar(double x) {
  const double l = std::log(x);
  const double e = std::exp(x);
  const double arg = std::max(0.0, (l - e) * (l - e) - 1e-10);
  return 0.5 * (l + e - std::sqrt(arg));
}
double root_p18() { return bisect_root(p18_scalar, 0.5, 1.5); }
double root_p19(std::size_t n) {
  const double nn = static_cast<double>(n);
  return bisect_root(
      [nn](double c) {
        return 2e-5 * (c - 1.0) + 4.0 * nn * c * c * c - c;
      },
      0.0, 1.0);
}

}  // namespace

Problem make_problem(const std::string& id, std::size_t n,
                     const RegistryOptions& opts) {
  if (n < 2) throw std::invalid_argument("make_problem: n must be >= 2");
  Problem p;
  p.id = id;
  p.dim = n;
  p.feasible_set = FeasibleSet::whole_space();

  if (id == "P01") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = 2.0 * x[i] - std::sin(x[i]);
    };
    p.feasible_set = FeasibleSet::box_lower(n, -2.0);
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P02") {
    const double nn = static_cast<double>(n);
    p.eval = [nn](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = std::log(std::fabs(x[i]) + 1.0) - x[i] / nn;
    };
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P03") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::exp(x[i]) - 1.0;
    };
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P04") {
    // Tridiagonal with a one-sided quadratic term; the first row has no
    // left neighbour, so its quadratic term is absent.
    p.eval = [](const Vec& x, Vec& g) {
      const std::size_t m = x.size();
      g[0] = 4.0 * x[0] + (x[1] - 2.0 * x[0]);
      for (std::size_t i = 1; i + 1 < m; ++i)
        g[i] = 4.0 * x[i] + (x[i + 1] - 2.0 * x[i]) -
               x[i - 1] * x[i - 1] / 3.0;
      g[m - 1] = 4.0 * x[m - 1] + (x[m - 2] - 2.0 * x[m - 1]) -
                 x[m - 2] * x[m - 2] / 3.0;
    };
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P05") {
    const double d = static_cast<double>(n) + 1.0;
    p.eval = [d](const Vec& x, Vec& g) {
      const std::size_t m = x.size();
      g[0] = x[0] - std::exp(std::cos((x[0] + x[1]) / d));
      for (std::size_t i = 1; i + 1 < m; ++i)
        g[i] = x[i] - std::exp(std::cos((x[i - 1] + x[i] + x[i + 1]) / d));
      g[m - 1] = x[m - 1] - std::exp(std::cos((x[m - 2] + x[m - 1]) / d));
    };
  } else if (id == "P06") {
    p.eval = [](const Vec& x, Vec& g) {
      const std::size_t m = x.size();
      g[0] = x[0] + std::sin(x[0]) - 1.0;
      for (std::size_t i = 1; i + 1 < m; ++i)
        g[i] = -x[i - 1] + 2.0 * x[i] + std::sin(x[i]) - 1.0;
      g[m - 1] = x[m - 1] + std::sin(x[m - 1]) - 1.0;
    };
    p.known_root = const_vec(n, root_p06());
  } else if (id == "P07") {
    p.eval = [](const Vec& x, Vec& g) {
      double s = 0.0;
      for (double v : x) s += v * v;
      g[0] = s;
      for (std::size_t i = 1; i < x.size(); ++i) g[i] = -2.0 * x[0] * x[i];
    };
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P08") {
    p.eval = [](const Vec& x, Vec& g) {
      const std::size_t m = x.size();
      g[0] = x[0] * (x[0] * x[0] + x[1] * x[1]) - 1.0;
      for (std::size_t i = 1; i + 1 < m; ++i)
        g[i] = x[i] * (x[i - 1] * x[i - 1] + 2.0 * x[i] * x[i] +
                       x[i + 1] * x[i + 1]) -
               1.0;
      g[m - 1] = x[m - 1] * (x[m - 2] * x[m - 2] + x[m - 1] * x[m - 1]);
    };
  } else if (id == "P09") {
    const bool classic = opts.classic_trigexp;
    p.eval = [classic](const Vec& x, Vec& g) {
      const std::size_t m = x.size();
      g[0] = 3.0 * x[0] * x[0] * x[0] + 2.0 * x[1] - 5.0 +
             std::sin(std::fabs(x[0] - x[1])) *
                 std::sin(std::fabs(x[0] + x[1]));
      for (std::size_t i = 1; i + 1 < m; ++i) {
        const double cubic =
            classic ? x[i] * (4.0 + 3.0 * x[i] * x[i])
                    : x[0] * (4.0 + 3.0 * x[i] * x[i] * x[i]);
        g[i] = -x[i - 1] * std::exp(x[i - 1] - x[i]) + cubic +
               2.0 * x[i + 1] - 5.0 +
               std::sin(std::fabs(x[i] - x[i + 1])) *
                   std::sin(std::fabs(x[i] + x[i + 1]));
      }
      g[m - 1] =
          -x[m - 2] * std::exp(x[m - 2] - x[m - 1]) + 4.0 * x[m - 1] - 3.0;
    };
  } else if (id == "P10") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = (x[i] - 1.0) * (x[i] - 1.0) - 1.01;
    };
    p.known_root = const_vec(n, 1.0 + std::sqrt(1.01));
  } else if (id == "P11") {
    const double nn = static_cast<double>(n);
    p.eval = [nn](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = (static_cast<double>(i + 1) / nn) * std::exp(x[i]) - 1.0;
    };
    Vec r(n);
    for (std::size_t i = 0; i < n; ++i)
      r[i] = std::log(nn / static_cast<double>(i + 1));
    p.known_root = std::move(r);
  } else if (id == "P12") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = x[i] - std::sin(std::fabs(x[i] - 1.0));
    };
    p.known_root = const_vec(n, root_p12());
  } else if (id == "P13") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = 2.0 * x[i] - std::sin(std::fabs(x[i] - 1.0));
    };
    p.known_root = const_vec(n, root_p13());
  } else if (id == "P14") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = x[i] - 2.0 * std::sin(std::fabs(x[i] - 1.0));
    };
    p.known_root = const_vec(n, root_p14());
  } else if (id == "P15") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = std::exp(x[i]);
        g[i] = e * e + 3.0 * std::sin(x[i]) * std::cos(x[i]) - 1.0;
      }
    };
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P16") {
    p.eval = [](const Vec& x, Vec& g) {
      const std::size_t m = x.size();
      g[0] = 2.5 * x[0] + x[1] - 1.0;
      for (std::size_t i = 1; i + 1 < m; ++i)
        g[i] = x[i - 1] + 2.5 * x[i] + x[i + 1] - 1.0;
      g[m - 1] = x[m - 2] + 2.5 * x[m - 1] - 1.0;
    };
  } else if (id == "P17") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = 2.0 * x[i] - std::sin(std::fabs(x[i]));
    };
    p.known_root = const_vec(n, 0.0);
  } else if (id == "P18") {
    p.eval = [](const Vec& x, Vec& g) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double l = std::log(x[i]);
        const double e = std::exp(x[i]);
        const double arg = std::max(0.0, (l - e) * (l - e) - 1e-10);
        g[i] = 0.5 * (l + e - std::sqrt(arg));
      }
    };
    // The logarithm needs x > 0; a small positive floor keeps the iterates
    // inside the domain without moving the root.
    p.feasible_set = FeasibleSet::box_lower(n, 1e-8);
    p.known_root = const_vec(n, root_p18());
  } else if (id == "P19") {
    p.eval = [](const Vec& x, Vec& g) {
      double s = 0.0;
      for (double v : x) s += v * v;
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = 2e-5 * (x[i] - 1.0) + 4.0 * x[i] * s - x[i];
    };
    p.known_root = const_vec(n, root_p19(n));
  } else if (id == "P20") {
    const double nn = static_cast<double>(n);
    p.eval = [nn](const Vec& x, Vec& g) {
      double s = 0.0;
      for (double v : x) s += v;
      s /= nn;
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = x[i] * std::cos(x[i] - 1.0 / nn) *
               (std::sin(x[i]) - 1.0 - (1.0 - x[i]) * (1.0 - x[i]) - s);
    };
    p.known_root = const_vec(n, 0.0);
  } else {
    throw std::invalid_argument("make_problem: unknown problem id '" + id +
                                "'");
  }
  return p;
}

std::vector<Problem> registry(std::size_t n, const RegistryOptions& opts) {
  std::vector<Problem> out;
  for (const auto& id : problem_ids()) out.push_back(make_problem(id, n, opts));
  return out;
}

std::vector<std::string> initial_point_ids() {
  return {"x0_zero",         "x0_02",       "x0_04",
          "x0_05",           "x0_06",       "x0_08",
          "x0_ones",         "x0_11",       "x0_one_minus_inv_n",
          "x0_harmonic",     "x0_km1_over_m", "x0_inv_n",
          "x0_third_pow",    "x0_k_over_m"};
}

Vec initial_point(const std::string& raw, std::size_t n) {
  std::string id = raw;
  if (id.rfind("x0_", 0) != 0) id = "x0_" + id;
  const double nn = static_cast<double>(n);
  Vec x(n);
  if (id == "x0_zero") {
    return Vec(n, 0.0);
  } else if (id == "x0_02") {
    return Vec(n, 0.2);
  } else if (id == "x0_04") {
    return Vec(n, 0.4);
  } else if (id == "x0_05") {
    return Vec(n, 0.5);
  } else if (id == "x0_06") {
    return Vec(n, 0.6);
  } else if (id == "x0_08") {
    return Vec(n, 0.8);
  } else if (id == "x0_ones") {
    return Vec(n, 1.0);
  } else if (id == "x0_11") {
    return Vec(n, 1.1);
  } else if (id == "x0_one_minus_inv_n") {
    return Vec(n, 1.0 - 1.0 / nn);
  } else if (id == "x0_harmonic") {
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
  } else if (id == "x0_km1_over_m") {
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) / nn;
  } else if (id == "x0_inv_n") {
    return Vec(n, 1.0 / nn);
  } else if (id == "x0_third_pow") {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = std::pow(3.0, -static_cast<double>(i + 1));
  } else if (id == "x0_k_over_m") {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = static_cast<double>(i + 1) / nn;
  } else {
    throw std::invalid_argument("initial_point: unknown id '" + raw + "'");
  }
  return x;
}

std::vector<std::size_t> benchmark_dimensions() { return {1000, 10000, 50000}; }

std::vector<std::size_t> desk_dimensions() { return {100, 1000}; }

}  // namespace monsolve

#include <cmath>
#include <set>

#include "doctest.h"
#include "monsolve/linalg.hpp"
#include "monsolve/rng.hpp"

using namespace monsolve;

TEST_CASE("dot and norms") {
  const Vec a{1.0, 2.0, 3.0};
  const Vec b{4.0, -5.0, 6.0};
  CHECK(dot(a, b) == doctest::Approx(12.0));
  CHECK(norm2_sq(a) == doctest::Approx(14.0));
  CHECK(norm2(a) == doctest::Approx(std::sqrt(14.0)));
  CHECK(inf_norm(b) == doctest::Approx(6.0));
  CHECK_THROWS_AS((void)dot(a, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("dot handles lengths not divisible by the unroll width") {
  for (std::size_t n = 1; n <= 9; ++n) {
    Vec a(n), b(n);
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(i + 1);
      b[i] = 0.5 * static_cast<double>(i) - 1.0;
      ref += a[i] * b[i];
    }
    CHECK(dot(a, b) == doctest::Approx(ref));
  }
}

TEST_CASE("axpy, scaled, sub") {
  Vec y{1.0, 1.0};
  axpy(2.0, Vec{3.0, -1.0}, y);
  CHECK(y[0] == doctest::Approx(7.0));
  CHECK(y[1] == doctest::Approx(-1.0));
  const Vec s = scaled(-1.0, Vec{2.0, 0.0});
  CHECK(s[0] == doctest::Approx(-2.0));
  const Vec d = sub(Vec{5.0, 1.0}, Vec{2.0, 2.0});
  CHECK(d[0] == doctest::Approx(3.0));
  CHECK(d[1] == doctest::Approx(-1.0));
}

TEST_CASE("all_finite flags NaN and infinity") {
  CHECK(all_finite(Vec{0.0, -1.5}));
  CHECK_FALSE(all_finite(Vec{0.0, std::nan("")}));
  CHECK_FALSE(all_finite(Vec{1.0, INFINITY}));
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_int(3, 9);
    CHECK(v >= 3);
    CHECK(v <= 9);
  }
}

TEST_CASE("uniform_int covers the whole range") {
  Rng r(11);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(r.uniform_int(0, 7));
  CHECK(seen.size() == 8);
}

TEST_CASE("gaussian moments are sane") {
  Rng r(123);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = r.gaussian();
    s1 += g;
    s2 += g * g;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

#include "su2dyn/rotations.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"

using namespace su2dyn;

TEST_CASE("rational arithmetic reduces and guards overflow") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK((Rational(1, 2) / Rational(3, 2)) == Rational(1, 3));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, OverflowError);
}

TEST_CASE("golden ratio identities hold exactly") {
  const QuadraticIrrational a = golden_ratio();
  CHECK(a * a + a == QuadraticIrrational(1));
  CHECK(QuadraticIrrational(1) - a == a * a);
  CHECK(std::abs(a.to_double() - 0.6180339887498949) < 1e-16);
  // Exactness, not a float residual: the difference has rational part 0/1.
  const QuadraticIrrational res = (a * a + a) - QuadraticIrrational(1);
  CHECK(res.rational_part().is_zero());
  CHECK(res.surd_part().is_zero());
}

TEST_CASE("quadratic irrational ordering via exact signs") {
  const QuadraticIrrational a = golden_ratio();
  CHECK(a > QuadraticIrrational(0));
  CHECK(a < QuadraticIrrational(1));
  CHECK(a * a < a);
  CHECK(-(a * a) < QuadraticIrrational(0));
  // 11/5 < sqrt(5) < 9/4 pins the mixed-sign comparison logic both ways.
  const QuadraticIrrational sqrt5{Rational(0), Rational(1)};
  CHECK(sqrt5 < QuadraticIrrational{Rational(9, 4), Rational(0)});
  CHECK(sqrt5 > QuadraticIrrational{Rational(11, 5), Rational(0)});
  CHECK((QuadraticIrrational(1) / a) == a + QuadraticIrrational(1));
}

TEST_CASE("fibonacci denominators and their golden limits") {
  const auto q = fibonacci_denominators(6);
  CHECK(q == std::vector<long long>{1, 1, 2, 3, 5, 8});

  const auto qs = fibonacci_denominators(33);
  const double alpha = golden_ratio().to_double();
  const double a2 = alpha * alpha;
  const double a3 = a2 * alpha;
  const int n = 30;
  const double an = std::pow(alpha, n);
  // alpha^n q_{n+1} -> 1/(1+alpha^2) and alpha^n q_{n+2} -> 1/(alpha+alpha^3).
  CHECK(std::abs(an * static_cast<double>(qs[n]) - 1.0 / (1.0 + a2)) < 1e-9);
  CHECK(std::abs(an * static_cast<double>(qs[n + 1]) - 1.0 / (alpha + a3)) < 1e-9);
}

TEST_CASE("continued fraction recovery by the Gauss map") {
  const RotationNumber g = RotationNumber::from_double(golden_ratio().to_double());
  REQUIRE(g.cf_terms.size() >= 12);
  for (std::size_t i = 0; i < 12; ++i) CHECK(g.cf_terms[i] == 1);
  const auto fib = fibonacci_denominators(12);
  for (std::size_t i = 0; i < 12; ++i) CHECK(g.convergent_denominators[i] == fib[i]);

  // sqrt(2) - 1 = [0; 2, 2, 2, ...].
  const RotationNumber s = RotationNumber::from_double(std::sqrt(2.0) - 1.0);
  REQUIRE(s.cf_terms.size() >= 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(s.cf_terms[i] == 2);

  // Convergent quality |alpha - p_n/q_n| < 1/(q_n q_{n+1}).  The stored list
  // starts at the zeroth denominator, so after consuming term i the current
  // denominator sits at index i+1 and its successor at i+2.
  const RotationNumber r = RotationNumber::from_double(0.36787944117144233);
  double p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  for (std::size_t i = 0; i + 2 < r.convergent_denominators.size(); ++i) {
    const double a = static_cast<double>(r.cf_terms[i]);
    const double p_next = a * p_cur + p_prev;
    const double q_next = a * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
    CHECK(q_cur == static_cast<double>(r.convergent_denominators[i + 1]));
    const double qn1 = static_cast<double>(r.convergent_denominators[i + 2]);
    CHECK(std::abs(r.alpha - p_cur / q_cur) < 1.0 / (q_cur * qn1) + 1e-15);
  }
}

TEST_CASE("golden rotation number flags itself") {
  CHECK(RotationNumber::golden().is_golden());
  CHECK_FALSE(RotationNumber::from_double(0.5).is_golden());
}

TEST_CASE("rotate composes and inverts") {
  const RotationNumber half = RotationNumber::from_double(0.5);
  CHECK(rotate(CirclePoint(0.25), half, 1).x == doctest::Approx(0.75).epsilon(1e-15));

  const RotationNumber g = RotationNumber::golden();
  const CirclePoint x(0.1234567890123456);
  CHECK(rotate(x, g, 0).x == x.x);
  const CirclePoint y = rotate(rotate(x, g, 12345), g, -12345);
  CHECK(std::abs(y.x - x.x) < 1e-12);
  // Composed single steps match the direct n-step formula.
  CirclePoint z = x;
  for (int i = 0; i < 1000; ++i) z = rotate(z, g, 1);
  CHECK(std::abs(z.x - rotate(x, g, 1000).x) < 1e-12);
}

TEST_CASE("compensated reduction beats naive large-n products") {
  const double alpha = golden_ratio().to_double();
  // The double alpha is exactly numer / 2^53, so frac(n * alpha) is an exact
  // dyadic rational computable in 128-bit integers.
  const auto numer = static_cast<__int128>(std::llround(std::ldexp(alpha, 53)));
  REQUIRE(std::ldexp(static_cast<double>(static_cast<long long>(numer)), -53) == alpha);
  const long long n = 1'000'000'000'007LL;
  const __int128 two53 = static_cast<__int128>(1) << 53;
  const __int128 fracnum = (numer * n) % two53;
  const double r = std::ldexp(static_cast<double>(static_cast<long long>(fracnum)), -53);
  CHECK(std::abs(frac_mul(n, alpha) - r) < 1e-12);
  // The naive product loses roughly n*eps of the fractional part.
  const double naive = wrap_unit(static_cast<double>(n) * alpha);
  CHECK(std::abs(naive - r) > 1e-8);
}

TEST_CASE("three-distance sanity for golden orbits") {
  const double alpha = golden_ratio().to_double();
  const auto q = fibonacci_denominators(21);
  for (int k = 4; k <= 20; ++k) {
    const long long qk = q[static_cast<std::size_t>(k - 1)];
    std::vector<double> orbit;
    orbit.reserve(static_cast<std::size_t>(qk));
    for (long long j = 0; j < qk; ++j) orbit.push_back(frac_mul(j, alpha));
    std::sort(orbit.begin(), orbit.end());
    double min_gap = 1.0;
    for (std::size_t i = 0; i + 1 < orbit.size(); ++i) {
      min_gap = std::min(min_gap, orbit[i + 1] - orbit[i]);
    }
    // Smallest orbit gap is at least the previous convergent's remainder
    // |q_{k-1} alpha - p_{k-1}|.
    const long long qk1 = q[static_cast<std::size_t>(k - 2)];
    const double rem = std::abs(frac_mul(qk1, alpha) <= 0.5 ? frac_mul(qk1, alpha)
                                                            : frac_mul(qk1, alpha) - 1.0);
    CHECK(min_gap >= rem - 1e-13);
  }
}

TEST_CASE("torus flow advances both coordinates") {
  const TorusPoint p(0.2, 0.9);
  const TorusPoint q0 = flow_advance(p, 0.7, 0.0);
  CHECK(q0.x1 == p.x1);
  CHECK(q0.x2 == p.x2);
  const TorusPoint q1 = flow_advance(TorusPoint(0.0, 0.0), 0.7, 1.0);
  CHECK(q1.x1 == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(q1.x2 == doctest::Approx(0.0));
  const TorusPoint back = flow_advance(flow_advance(p, 0.7, 2.5), 0.7, -2.5);
  CHECK(std::abs(back.x1 - p.x1) < 1e-12);
  CHECK(std::abs(back.x2 - p.x2) < 1e-12);
}

#pragma once

// Circle and 2-torus rotations, continued-fraction data for irrational
// rotation numbers, and exact arithmetic in Q(sqrt 5) for the golden ratio.
//
// Exactness matters in one place: the interval renormalization works on
// [-alpha^2, alpha) and repeatedly classifies points against the endpoints
// -alpha^2, 0, alpha^3, alpha.  Floating-point classification misassigns
// branches at depth > 20, so those comparisons go through QuadraticIrrational.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace su2dyn {

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Reduced fraction with a positive denominator.  Intermediates are widened
// to 128 bits; a result that does not fit in 64 bits throws rather than
// wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long num, long long den);
  Rational(long long n) : num_(n), den_(1) {}

  long long num() const { return num_; }
  long long den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  bool is_zero() const { return num_ == 0; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  long long num_, den_;
};

// p + q sqrt(5) with rational p, q.  A field: closed under + - * /, with
// exact comparisons, so golden-ratio identities like alpha^2 + alpha = 1
// hold on the nose.
class QuadraticIrrational {
 public:
  QuadraticIrrational() = default;
  QuadraticIrrational(Rational p, Rational q) : p_(p), q_(q) {}
  QuadraticIrrational(long long n) : p_(n), q_(0) {}

  static QuadraticIrrational golden();  // (sqrt 5 - 1) / 2

  const Rational& rational_part() const { return p_; }
  const Rational& surd_part() const { return q_; }

  QuadraticIrrational operator+(const QuadraticIrrational& o) const;
  QuadraticIrrational operator-(const QuadraticIrrational& o) const;
  QuadraticIrrational operator*(const QuadraticIrrational& o) const;
  QuadraticIrrational operator/(const QuadraticIrrational& o) const;
  QuadraticIrrational operator-() const { return {-p_, -q_}; }

  int sign() const;
  bool operator==(const QuadraticIrrational& o) const { return p_ == o.p_ && q_ == o.q_; }
  bool operator<(const QuadraticIrrational& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const QuadraticIrrational& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const QuadraticIrrational& o) const { return (*this - o).sign() > 0; }
  bool operator>=(const QuadraticIrrational& o) const { return (*this - o).sign() >= 0; }

  double to_double() const;

 private:
  Rational p_, q_;
};

// x mod 1 in [0, 1).
inline double wrap_unit(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

// fract(n * alpha) without the naive product's precision loss: the product
// is split into rounded value plus exact fma residual before reduction.
inline double frac_mul(long long n, double alpha) {
  const double p = static_cast<double>(n) * alpha;
  const double e = std::fma(static_cast<double>(n), alpha, -p);
  return wrap_unit(wrap_unit(p) + e);
}

struct CirclePoint {
  double x = 0.0;
  CirclePoint() = default;
  explicit CirclePoint(double v) : x(wrap_unit(v)) {}
};

struct TorusPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  TorusPoint() = default;
  TorusPoint(double a, double b) : x1(wrap_unit(a)), x2(wrap_unit(b)) {}
};

struct RotationNumber {
  double alpha = 0.0;
  std::vector<long long> cf_terms;                 // partial quotients a_1, a_2, ...
  std::vector<long long> convergent_denominators;  // q_1, q_2, ...
  std::optional<QuadraticIrrational> exact;        // set for the golden ratio

  // Recovers continued-fraction data by the Gauss map until double
  // precision is exhausted (at most 38 terms).
  static RotationNumber from_double(double alpha);
  static RotationNumber golden();

  bool is_golden() const { return exact.has_value() && *exact == QuadraticIrrational::golden(); }
};

CirclePoint rotate(CirclePoint x, const RotationNumber& alpha, long long n = 1);

QuadraticIrrational golden_ratio();

// q_1 = 1, q_2 = 1, q_n = q_{n-1} + q_{n-2}: the convergent denominators of
// the golden ratio.
std::vector<long long> fibonacci_denominators(int count);

// S_t(x1, x2) = (x1 + t omega, x2 + t).
TorusPoint flow_advance(TorusPoint p, double omega, double t);

}  // namespace su2dyn

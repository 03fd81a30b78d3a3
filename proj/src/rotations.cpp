#include "su2dyn/rotations.hpp"

#include <numeric>

namespace su2dyn {

namespace {

using int128 = __int128;

long long narrow(int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw OverflowError(what);
  }
  return static_cast<long long>(v);
}

Rational make_reduced(int128 num, int128 den, const char* what) {
  if (den == 0) {
    throw std::domain_error("rational with zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int128 a = num < 0 ? -num : num;
  int128 b = den;
  while (b != 0) {
    const int128 r = a % b;
    a = b;
    b = r;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num, what), narrow(den, what));
}

}  // namespace

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
  if (den_ == 0) {
    throw std::domain_error("rational with zero denominator");
  }
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return make_reduced(int128(num_) * o.den_ + int128(o.num_) * den_, int128(den_) * o.den_,
                      "rational addition overflow");
}

Rational Rational::operator-(const Rational& o) const {
  return make_reduced(int128(num_) * o.den_ - int128(o.num_) * den_, int128(den_) * o.den_,
                      "rational subtraction overflow");
}

Rational Rational::operator*(const Rational& o) const {
  return make_reduced(int128(num_) * o.num_, int128(den_) * o.den_,
                      "rational multiplication overflow");
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) {
    throw std::domain_error("rational division by zero");
  }
  return make_reduced(int128(num_) * o.den_, int128(den_) * o.num_, "rational division overflow");
}

QuadraticIrrational QuadraticIrrational::golden() {
  return {Rational(-1, 2), Rational(1, 2)};
}

QuadraticIrrational QuadraticIrrational::operator+(const QuadraticIrrational& o) const {
  return {p_ + o.p_, q_ + o.q_};
}

QuadraticIrrational QuadraticIrrational::operator-(const QuadraticIrrational& o) const {
  return {p_ - o.p_, q_ - o.q_};
}

QuadraticIrrational QuadraticIrrational::operator*(const QuadraticIrrational& o) const {
  return {p_ * o.p_ + Rational(5) * q_ * o.q_, p_ * o.q_ + q_ * o.p_};
}

QuadraticIrrational QuadraticIrrational::operator/(const QuadraticIrrational& o) const {
  // Multiply by the conjugate: 1/(p + q sqrt5) = (p - q sqrt5)/(p^2 - 5 q^2).
  const Rational denom = o.p_ * o.p_ - Rational(5) * o.q_ * o.q_;
  if (denom.is_zero()) {
    throw std::domain_error("division by zero quadratic irrational");
  }
  const QuadraticIrrational conj{o.p_ / denom, -o.q_ / denom};
  return *this * conj;
}

int QuadraticIrrational::sign() const {
  const int sp = p_.sign();
  const int sq = q_.sign();
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // Mixed signs: compare p^2 against 5 q^2; the larger magnitude wins.
  const Rational diff = p_ * p_ - Rational(5) * q_ * q_;
  const int sd = diff.sign();
  if (sd == 0) return 0;  // cannot happen for nonzero p, q (sqrt 5 irrational)
  return sd > 0 ? sp : sq;
}

double QuadraticIrrational::to_double() const {
  return p_.to_double() + q_.to_double() * std::sqrt(5.0);
}

RotationNumber RotationNumber::from_double(double alpha) {
  RotationNumber r;
  r.alpha = wrap_unit(alpha);
  double x = r.alpha;
  long long q_prev = 0, q_cur = 1;
  long long p_prev = 1, p_cur = 0;
  // Indexing convention: the list starts at the zeroth denominator 1, so
  // that for the golden ratio it reads 1, 1, 2, 3, 5, 8, ...
  r.convergent_denominators.push_back(1);
  for (int i = 0; i < 38 && x > 1e-15; ++i) {
    const double inv = 1.0 / x;
    if (inv > 9.0e15) break;  // precision exhausted
    const long long a = static_cast<long long>(std::floor(inv));
    const long long q_next = a * q_cur + q_prev;
    const long long p_next = a * p_cur + p_prev;
    if (q_next < q_cur) break;  // overflow guard
    r.cf_terms.push_back(a);
    r.convergent_denominators.push_back(q_next);
    q_prev = q_cur;
    q_cur = q_next;
    p_prev = p_cur;
    p_cur = p_next;
    x = inv - static_cast<double>(a);
    // Stop once the convergent reproduces alpha to full precision.
    if (std::abs(r.alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur)) < 1e-17) {
      break;
    }
  }
  return r;
}

RotationNumber RotationNumber::golden() {
  RotationNumber r;
  r.exact = QuadraticIrrational::golden();
  r.alpha = r.exact->to_double();
  r.cf_terms.assign(38, 1);
  const auto fib = fibonacci_denominators(38);
  r.convergent_denominators.assign(fib.begin(), fib.end());
  return r;
}

CirclePoint rotate(CirclePoint x, const RotationNumber& alpha, long long n) {
  return CirclePoint(x.x + frac_mul(n, alpha.alpha));
}

QuadraticIrrational golden_ratio() { return QuadraticIrrational::golden(); }

std::vector<long long> fibonacci_denominators(int count) {
  if (count < 2) {
    throw std::invalid_argument("fibonacci_denominators needs count >= 2");
  }
  std::vector<long long> q(static_cast<std::size_t>(count));
  q[0] = 1;
  q[1] = 1;
  for (int i = 2; i < count; ++i) {
    q[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i - 1)] + q[static_cast<std::size_t>(i - 2)];
  }
  return q;
}

TorusPoint flow_advance(TorusPoint p, double omega, double t) {
  return TorusPoint(p.x1 + t * omega, p.x2 + t);
}

}  // namespace su2dyn

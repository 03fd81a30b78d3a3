#include "su2dyn/su2.hpp"

#include <cmath>

namespace su2dyn {

double AlgebraElement::norm() const { return std::sqrt(norm_sq()); }

double norm(const AlgebraElement& v) { return v.norm(); }

GroupElement::GroupElement(std::complex<double> z1, std::complex<double> z2) : z1_(z1), z2_(z2) {
  const double n2 = std::norm(z1_) + std::norm(z2_);
  if (n2 < 0.25) {
    throw ZeroElementError("group element constructed far from the unit sphere");
  }
  if (std::abs(n2 - 1.0) > 1e-12) {
    const double inv = 1.0 / std::sqrt(n2);
    z1_ *= inv;
    z2_ *= inv;
  }
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  // Row-by-column product of the two 2x2 matrices; the result stays in the
  // (z1, z2) form because the representation is closed under multiplication.
  return GroupElement(z1_ * o.z1_ - z2_ * std::conj(o.z2_),
                      z1_ * o.z2_ + z2_ * std::conj(o.z1_));
}

namespace {

// ad A in the (a, b, c) basis: column j holds [A, E_j].
void ad_matrix(const AlgebraElement& v, double m[3][3]) {
  // [E1, E2] = 2 E3, [E2, E3] = 2 E1, [E3, E1] = 2 E2, i.e. ad A = 2 (A x .).
  m[0][0] = 0.0;
  m[0][1] = -2.0 * v.c;
  m[0][2] = 2.0 * v.b;
  m[1][0] = 2.0 * v.c;
  m[1][1] = 0.0;
  m[1][2] = -2.0 * v.a;
  m[2][0] = -2.0 * v.b;
  m[2][1] = 2.0 * v.a;
  m[2][2] = 0.0;
}

}  // namespace

double ad_scalar_product(const AlgebraElement& x, const AlgebraElement& y) {
  double mx[3][3], my[3][3];
  ad_matrix(x, mx);
  ad_matrix(y, my);
  double trace = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      trace += mx[i][k] * my[k][i];
    }
  }
  return -trace / 8.0;
}

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y) {
  return {2.0 * (x.b * y.c - x.c * y.b),
          2.0 * (x.c * y.a - x.a * y.c),
          2.0 * (x.a * y.b - x.b * y.a)};
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& v) {
  // Rotation of (a, b, c) by the quaternion (w, qx, qy, qz):
  // v' = v + w t + q x t with t = 2 (q x v).
  const double w = g.z1().real();
  const double qx = g.z1().imag();
  const double qy = g.z2().real();
  const double qz = g.z2().imag();
  const double tx = 2.0 * (qy * v.c - qz * v.b);
  const double ty = 2.0 * (qz * v.a - qx * v.c);
  const double tz = 2.0 * (qx * v.b - qy * v.a);
  return {v.a + w * tx + (qy * tz - qz * ty),
          v.b + w * ty + (qz * tx - qx * tz),
          v.c + w * tz + (qx * ty - qy * tx)};
}

GroupElement exponential(const AlgebraElement& v) {
  const double t = v.norm();
  double sinc;
  if (t < 1e-6) {
    const double t2 = t * t;
    sinc = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  } else {
    sinc = std::sin(t) / t;
  }
  return GroupElement(std::complex<double>(std::cos(t), sinc * v.a),
                      std::complex<double>(sinc * v.b, sinc * v.c));
}

GroupElement diagonalizer(const AlgebraElement& v) {
  const double n = v.norm();
  if (n == 0.0) {
    throw ZeroElementError("diagonalizer of the zero element");
  }
  // z1 = -i sqrt((n+a)/2n) (b-ic)/|b+ic|, z2 = -sqrt((n-a)/2n).  The first
  // row of B is the conjugated unit eigenvector for eigenvalue i norm(A),
  // which is what B A B^{-1} = diag(i norm A, -i norm A) requires.  Whichever
  // of n - a and n + a is small is rewritten as (b^2 + c^2) over the large
  // one so that nearly axis-aligned elements are diagonalized to full
  // precision instead of losing the off-axis part to cancellation.  Exactly
  // axis-aligned elements take the two closed branches (identity and the
  // Weyl flip); the phase is undefined there.
  const double rb = std::hypot(v.b, v.c);
  if (rb == 0.0) {
    if (v.a < 0.0) {
      // A = -norm(A) E1 is flipped by the Weyl element.
      return GroupElement(std::complex<double>(0.0, 0.0), std::complex<double>(-1.0, 0.0));
    }
    return GroupElement();
  }
  const std::complex<double> phase(v.b / rb, -v.c / rb);
  double up, dn;
  if (v.a >= 0.0) {
    up = std::sqrt((n + v.a) / (2.0 * n));
    dn = rb / std::sqrt(2.0 * n * (n + v.a));
  } else {
    dn = std::sqrt((n - v.a) / (2.0 * n));
    up = rb / std::sqrt(2.0 * n * (n - v.a));
  }
  return GroupElement(std::complex<double>(0.0, -up) * phase,
                      std::complex<double>(-dn, 0.0));
}

double distance(const GroupElement& g, const GroupElement& h) {
  return std::sqrt(std::norm(g.z1() - h.z1()) + std::norm(g.z2() - h.z2()));
}

}  // namespace su2dyn

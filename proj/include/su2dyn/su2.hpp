#pragma once

// SU(2) and its Lie algebra su(2).
//
// A group element is stored as the pair (z1, z2) with |z1|^2 + |z2|^2 = 1,
// standing for the matrix
//
//     [  z1        z2      ]
//     [ -conj(z2)  conj(z1)]
//
// which is the unit-quaternion picture: (Re z1, Im z1, Re z2, Im z2) are the
// quaternion components (w, x, y, z).
//
// An algebra element is the real triple (a, b, c), standing for
//
//     [  ia      b + ic ]
//     [ -b + ic   -ia   ]
//
// so that norm(A) = sqrt(det A) = sqrt(a^2 + b^2 + c^2).  The commutator in
// these coordinates is twice the vector cross product, and the invariant
// scalar product -(1/8) tr(ad A . ad B) reduces to the Euclidean dot product.

#include <complex>
#include <stdexcept>

namespace su2dyn {

struct ZeroElementError : std::domain_error {
  using std::domain_error::domain_error;
};

struct AlgebraElement {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double norm_sq() const { return a * a + b * b + c * c; }
  double norm() const;

  AlgebraElement operator+(const AlgebraElement& o) const { return {a + o.a, b + o.b, c + o.c}; }
  AlgebraElement operator-(const AlgebraElement& o) const { return {a - o.a, b - o.b, c - o.c}; }
  AlgebraElement operator-() const { return {-a, -b, -c}; }
  AlgebraElement operator*(double s) const { return {a * s, b * s, c * s}; }
  AlgebraElement& operator+=(const AlgebraElement& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    return *this;
  }
};

inline AlgebraElement operator*(double s, const AlgebraElement& v) { return v * s; }

class GroupElement {
 public:
  // Identity.
  GroupElement() : z1_(1.0, 0.0), z2_(0.0, 0.0) {}

  // Renormalizes when the unit-length constraint has drifted by more than
  // 1e-12; rejects inputs that are nowhere near the group.
  GroupElement(std::complex<double> z1, std::complex<double> z2);

  std::complex<double> z1() const { return z1_; }
  std::complex<double> z2() const { return z2_; }

  GroupElement inverse() const { return GroupElement(std::conj(z1_), -z2_, unchecked_tag{}); }

  GroupElement operator*(const GroupElement& o) const;

 private:
  struct unchecked_tag {};
  GroupElement(std::complex<double> z1, std::complex<double> z2, unchecked_tag)
      : z1_(z1), z2_(z2) {}

  std::complex<double> z1_, z2_;
};

double norm(const AlgebraElement& v);

// Invariant scalar product -(1/8) tr(ad A . ad B), evaluated literally via
// the 3x3 adjoint matrices in the (a, b, c) coordinate basis.
double ad_scalar_product(const AlgebraElement& x, const AlgebraElement& y);

// AB - BA; equals twice the cross product in (a, b, c) coordinates.
AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y);

// g A g^{-1}, computed as the quaternion rotation of (a, b, c).
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& v);

// exp(A) = cos(norm A) Id + (sin(norm A)/norm A) A, with the series form of
// sin(t)/t below t = 1e-6.
GroupElement exponential(const AlgebraElement& v);

// A unitary B with B A B^{-1} = diag(i norm(A), -i norm(A)).  Three branches:
// the generic closed form, and the two degenerate axes a = +-norm(A) where
// the generic formula divides by |b + ic| = 0.  The branch test treats A as
// degenerate when norm(A) - |a| <= 1e-9 * norm(A).  Throws ZeroElementError
// when norm(A) = 0.
GroupElement diagonalizer(const AlgebraElement& v);

// sqrt(|g.z1 - h.z1|^2 + |g.z2 - h.z2|^2); this equals the dimension-scaled
// Frobenius distance of the two matrices.
double distance(const GroupElement& g, const GroupElement& h);

}  // namespace su2dyn

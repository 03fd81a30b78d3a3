#ifndef SU2DYN_IRREPS_HPP
#define SU2DYN_IRREPS_HPP

#include <Eigen/Dense>
#include <complex>

#include "su2dyn/su2.hpp"

// Irreducible representations of SU(2) and the quantitative facts about them
// that the spectral diagnostics rest on.
//
// Pi_k acts on homogeneous polynomials of degree k in (u, v) by substitution,
//
//   [Pi_k(g) f](u, v) = f(z1 u - conj(z2) v, z2 u + conj(z1) v),
//
// and is computed here as a (k+1)x(k+1) matrix on the monomial basis
// u^{k-j} v^j.  The derived algebra representation Pi_k* is tabulated in the
// basis v_0..v_k in which, with h = diag(1,-1), e upper triangular and f
// lower triangular,
//
//   Pi_k*(e) v_i = i(k-i+1) v_{i-1},
//   Pi_k*(f) v_i = v_{i+1},
//   Pi_k*(h) v_i = (k-2i) v_i.
//
// The two bases differ by the diagonal scaling v_i = (k!/(k-i)!) m_i, exposed
// below so identities mixing Pi_k and Pi_k* can be stated exactly.

namespace su2dyn {

struct IrrepMatrix {
  int k = 0;
  Eigen::MatrixXcd entries;
};

struct AlgebraIrrepMatrix {
  int k = 0;
  Eigen::MatrixXcd entries;
};

// Dimension-scaled matrix norm sqrt((1/d) sum |m_ij|^2), the norm all the
// representation bounds are stated in.
double representation_norm(const Eigen::MatrixXcd& m);

// Matrix of Pi_k(g) on the monomial basis, by exact binomial expansion.
// k >= 0.
IrrepMatrix pi_k(int k, const GroupElement& g);

// Matrix of Pi_k*(A) in the v-basis: decompose A = ia h + (b+ic) e + (-b+ic) f
// and apply the tabulated actions complex-linearly.  k >= 1.
AlgebraIrrepMatrix pi_k_star(int k, const AlgebraElement& v);

// Diagonal change of basis: entry i is k!/(k-i)!, so that
// (v-basis matrix) = D^{-1} (monomial-basis matrix) D.
Eigen::VectorXd v_basis_scaling(int k);

// Pi_k*(A) carried to the monomial basis, where it is literally the
// derivative of Pi_k along one-parameter subgroups.
AlgebraIrrepMatrix pi_k_star_monomial(int k, const AlgebraElement& v);

// Both sides of det Pi_{2k-1}*(A) = ((2k-1)!!)^2 (det A)^k, with det A read
// as norm(A)^2.
struct DeterminantIdentityReport {
  std::complex<double> lhs;
  std::complex<double> rhs;
  double rel_error = 0.0;
};
DeterminantIdentityReport verify_determinant_identity(int k, const AlgebraElement& v);

// The two-sided bound norm(A) <= ||Pi_k*(A)|| <= k^2 norm(A).
struct NormSandwichReport {
  double lower = 0.0;   // norm(A)
  double middle = 0.0;  // ||Pi_k*(A)||
  double upper = 0.0;   // k^2 norm(A)
  bool lower_ok = false;
  bool upper_ok = false;
};
NormSandwichReport verify_norm_sandwich(int k, const AlgebraElement& v);

// The constant K_k = (2k)^{4k+1} (2k-1)! / ((2k-1)!!)^2 controlling the
// inverse of Pi_{2k-1}*(A); K_1 = 32.
double inverse_bound_constant(int k);

// ||Pi_{2k-1}*(A)^{-1}|| against K_k / norm(A).  Throws ZeroElementError when
// norm(A) = 0 (the matrix is exactly singular then).
struct InverseBoundReport {
  double norm_inverse = 0.0;
  double bound = 0.0;
  bool ok = false;
};
InverseBoundReport inverse_bound_check(int k, const AlgebraElement& v);

}  // namespace su2dyn

#endif  // SU2DYN_IRREPS_HPP

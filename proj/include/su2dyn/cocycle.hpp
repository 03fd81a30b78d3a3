#ifndef SU2DYN_COCYCLE_HPP
#define SU2DYN_COCYCLE_HPP

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "su2dyn/rotations.hpp"
#include "su2dyn/su2.hpp"

// Cocycles over circle rotations and the machinery built on top of them:
// iteration, the transfer operator, logarithmic-derivative accumulation, the
// degree estimator, and the diagonalizing transfer function.
//
// A cocycle is a map phi: T -> SU(2).  Its iterates are
//
//   phi^(n)(x) = phi(x) phi(Tx) ... phi(T^{n-1}x)   for n > 0,
//   phi^(0)    = e,
//   phi^(n)(x) = (phi^(-n)(T^n x))^{-1}             for n < 0,
//
// where T is the rotation by alpha.  The central derived quantity is the
// right logarithmic derivative phi~ = Dphi.phi^{-1}, a map into su(2); the
// accumulation (1/n) Dphi^(n) (phi^(n))^{-1} converges to a field psi whose
// norm is the degree of the cocycle.

namespace su2dyn {

// Thrown when the accumulated field psi is numerically zero somewhere, so no
// diagonalizing transfer function exists (degree likely zero).
class DegenerateFieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when second-derivative data is requested from a cocycle backing
// that only carries first derivatives.
class NotC2Error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when the conjugated product p(x) phi(x) p(Tx)^{-1} fails to be
// diagonal within tolerance, which signals degree zero or insufficient
// accumulation length.
class NotDiagonalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Real periodic profile c + sum_j (a_j cos(2 pi j x) + b_j sin(2 pi j x))
// with j starting at 1, plus optional periodized Bernoulli terms
// d_j B4({j x}).  Used for diagonal phases and conjugator exponents.  The
// Bernoulli terms are twice continuously differentiable with a jump in the
// third derivative at the seams, so they produce profiles that are sharply
// C2; trig polynomials alone are analytic, which hides finite-smoothness
// decay rates below rounding noise.
struct TrigPoly {
  double constant = 0.0;
  std::vector<double> cos_coeff;
  std::vector<double> sin_coeff;
  std::vector<double> bernoulli4_coeff;

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
};

// Finite product q(x) = exp(f_1(x) W_1) ... exp(f_m(x) W_m) of one-parameter
// subgroups with trigonometric-polynomial exponents.  Periodic in x, so
// conjugating by q never changes the degree.  Carries closed-form first and
// second logarithmic derivatives.
class Conjugator {
 public:
  struct Logs {
    GroupElement q;
    AlgebraElement dq;   // Dq(x) q(x)^{-1}
    AlgebraElement ddq;  // derivative of the above
  };

  Conjugator& add_factor(TrigPoly exponent, AlgebraElement direction);
  bool empty() const { return factors_.empty(); }

  GroupElement value(double x) const;
  Logs value_and_logs(double x) const;

 private:
  std::vector<std::pair<TrigPoly, AlgebraElement>> factors_;
};

// An evaluable cocycle.  Immutable: factories build one backing and the
// handle shares it, so copies are cheap and thread-safe to read.
class Cocycle {
 public:
  enum class Smoothness { C1, C2, PiecewiseC1 };
  enum class Backing { ClosedForm, DiagonalFourier, GridSpline };

  GroupElement value(CirclePoint x) const;
  // Dphi(x) phi(x)^{-1}.
  AlgebraElement log_derivative(CirclePoint x) const;
  // Derivative of the logarithmic derivative; throws NotC2Error unless the
  // backing carries second-order data.
  AlgebraElement log_derivative_prime(CirclePoint x) const;
  // Both of the above at once; backings that share work between the two
  // (conjugated products) evaluate faster through this call.
  std::pair<GroupElement, AlgebraElement> value_and_log_derivative(CirclePoint x) const;

  Smoothness smoothness() const;
  Backing backing() const;

  // phi(x) = g for all x.
  static Cocycle constant(const GroupElement& g);
  // phi(x) = diag(e^{i theta(x)}, e^{-i theta(x)}) with
  // theta(x) = 2 pi winding x + phase(x).  Degree is 2 pi |winding|.
  static Cocycle diagonal(int winding, TrigPoly phase = {});
  // phi(x) = q(x)^{-1} base(x) q(x + alpha): cohomologous to base, same
  // degree, but no longer diagonal.
  static Cocycle conjugated(const Cocycle& base, const Conjugator& q,
                            const RotationNumber& alpha);
  // Catmull-Rom interpolation through samples at x_i = i / samples.size()
  // (periodic).  C1 only.  Requires at least four samples.
  static Cocycle from_samples(std::vector<GroupElement> samples);

  struct Impl;

 private:
  explicit Cocycle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Per-grid-point values of (1/n) Dphi^(n) (phi^(n))^{-1}.
struct DerivativeAccumulation {
  long long n = 0;
  std::vector<CirclePoint> grid;
  std::vector<AlgebraElement> values;
};

// Output of the degree estimator: the L1 means along the schedule, the
// extrapolated limit, the equivariance defect of the field at the largest n,
// and the field itself.
struct DegreeReport {
  std::vector<std::pair<long long, double>> estimates;
  double extrapolated = 0.0;
  double residual = 0.0;
  DerivativeAccumulation psi_field;
};

// p(x) = B_{psi(x)} per grid point, diagonalizing the limit field.  Keeps the
// accumulation length so downstream consumers can rebuild psi at shifted
// points with the same n.
struct TransferFunction {
  long long n = 0;
  std::vector<CirclePoint> grid;
  std::vector<GroupElement> p_values;
};

// The diagonal part gamma(x) = upper-left entry of p(x) phi(x) p(Tx)^{-1},
// with the largest off-diagonal magnitude seen over the grid.
struct DiagonalPart {
  std::vector<CirclePoint> grid;
  std::vector<std::complex<double>> gamma;
  double leakage = 0.0;
};

// phi^(n)(x) for any integer n (three-branch definition above).
GroupElement iterate(const Cocycle& phi, const RotationNumber& alpha, long long n,
                     CirclePoint x);

// (U^n f)(x) = Ad_{phi^(n)(x)} f(T^n x), the n-th power of the transfer
// operator U f = Ad_phi (f o T).  Any integer n.
AlgebraElement transfer_operator_apply(const Cocycle& phi, const RotationNumber& alpha,
                                       const std::function<AlgebraElement(CirclePoint)>& f,
                                       long long n, CirclePoint x);

// (1/n) Dphi^(n) (phi^(n))^{-1} on a uniform grid, computed per point with a
// single forward pass (running product, one Ad per step).  Requires n >= 1.
DerivativeAccumulation log_derivative_sum(const Cocycle& phi, const RotationNumber& alpha,
                                          long long n, int grid_size);

// (1/n^2) D(Dphi^(n) (phi^(n))^{-1}) via the commutator expansion
// sum_k [R_k, U^k phi~] + sum_k U^k (Dphi~) with R_k the running partial sum,
// O(n) per grid point.  Requires a C2 cocycle.
DerivativeAccumulation second_log_derivative_sum(const Cocycle& phi,
                                                 const RotationNumber& alpha, long long n,
                                                 int grid_size);

// Degree estimates along an increasing schedule of iteration lengths, with
// Aitken extrapolation on the tail.  The psi_field and residual refer to the
// largest scheduled n.
DegreeReport degree(const Cocycle& phi, const RotationNumber& alpha,
                    const std::vector<long long>& n_schedule, int grid_size);

// Diagonalizer of psi per grid point.  Throws DegenerateFieldError if any
// grid value has norm below degree_floor.
TransferFunction transfer_function(const DerivativeAccumulation& psi,
                                   double degree_floor = 1e-6);

// gamma(x) = upper-left entry of p(x) phi(x) p(Tx)^{-1}.  p(Tx) is obtained
// by rerunning the accumulation at Tx and diagonalizing, never by grid
// interpolation.  Throws NotDiagonalError if leakage exceeds 1e-3.
DiagonalPart diagonal_part(const Cocycle& phi, const TransferFunction& p,
                           const RotationNumber& alpha);

}  // namespace su2dyn

#endif  // SU2DYN_COCYCLE_HPP

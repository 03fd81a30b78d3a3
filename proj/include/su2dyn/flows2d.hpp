#ifndef SU2DYN_FLOWS2D_HPP
#define SU2DYN_FLOWS2D_HPP

// Cocycles over 2-torus rotations and over linear flows on the 2-torus.
//
// The discrete side generalizes the circle machinery: a cocycle
// phi: T^2 -> SU(2) over T(x1, x2) = (x1 + alpha, x2 + beta) has one
// degree component per coordinate, each the L1 limit of the corresponding
// partial log-derivative of phi^(n) divided by n.
//
// The continuous side works with the linear flow S_t(x1, x2) =
// (x1 + t omega, x2 + t) in two guises: fundamental-matrix cocycles
// integrated from an su(2)-valued field along flow lines, and suspensions
// that realize a prescribed circle cocycle as the time-one map of a flow
// cocycle.  Suspensions are built from a loop contraction: a homotopy from
// the constant identity loop to the target cocycle, flat in time near both
// ends so the glued flow stays twice differentiable.

#include <functional>
#include <utility>
#include <vector>

#include "su2dyn/cocycle.hpp"
#include "su2dyn/rotations.hpp"
#include "su2dyn/su2.hpp"

namespace su2dyn {

// Componentwise degree of a torus cocycle; both entries are L1 means, so
// they are nonnegative by construction.
struct DegreePair {
  double d1 = 0.0;
  double d2 = 0.0;
};

// An evaluable cocycle on the 2-torus: the value map and the two partial
// logarithmic derivatives (d/dx_i phi) phi^{-1}.
struct TorusCocycle {
  enum class Smoothness { C1, C2, PiecewiseC1 };

  std::function<GroupElement(TorusPoint)> value;
  std::function<AlgebraElement(TorusPoint)> d1_log_derivative;
  std::function<AlgebraElement(TorusPoint)> d2_log_derivative;
  Smoothness smoothness = Smoothness::C1;
};

// phi == g everywhere.
TorusCocycle torus_constant(const GroupElement& g);

// phi(x1, x2) = diag(e^{i theta}, e^{-i theta}) with
// theta = 2 pi (winding1 x1 + winding2 x2).
TorusCocycle torus_diagonal(int winding1, int winding2);

// Wraps a value map, supplying both partial log-derivatives by central
// finite differences of the values (h = 1e-5).
TorusCocycle torus_from_value(std::function<GroupElement(TorusPoint)> value,
                              TorusCocycle::Smoothness smoothness);

// Degree estimate along an increasing schedule of iteration lengths over
// the rotation by (alpha, beta), one Ad-weighted partial sum per
// coordinate, Aitken-extrapolated on the tail.  The pair (1, alpha, beta)
// is assumed rationally independent; that precondition is documented, not
// checked.
DegreePair torus_degree(const TorusCocycle& phi, double alpha, double beta,
                        const std::vector<long long>& n_schedule, int grid1, int grid2);

// Right-invariant linear system along the flow S_t(x1, x2) =
// (x1 + t omega, x2 + t): the solution of dy/dt = y(t) A(S_t p) with
// y(0) = Id.
struct FlowCocycle {
  std::function<AlgebraElement(TorusPoint)> generator;
  double omega = 0.0;
};

// Fundamental solution at time t from p, by a commutator-free fourth-order
// two-exponential step on a uniform partition into the given number of
// steps.  Every step multiplies by exact exponentials, so the result sits
// in the group up to rounding.
GroupElement flow_integrate(const FlowCocycle& fc, TorusPoint p, double t, int steps);

// A loop contraction: s -> homotopy(s, .) joins the constant identity loop
// (s = 0) to the circle cocycle `end` (s = 1), constant in s near both
// ends.  The data a suspension needs to interpolate between integer times.
struct SuspensionPath {
  std::function<GroupElement(double, CirclePoint)> homotopy;
  Cocycle end;
};

// The explicit contraction of the degree-k diagonal loop, k >= 1:
//
//   h(s, x) = exp(pi k x E) exp(pi k x n(s)),
//
// with E the diagonal axis and n(s) swinging from -E at s = 0 to +E at
// s = 1 through a perpendicular axis.  At s = 0 the factors cancel, at
// s = 1 they combine into the degree-k diagonal loop, and 1-periodicity in
// x holds for every s because exp(pi times a unit axis) = -Id is central.
// The sweep parameter is a quintic smoothstep in s, flat on [0, 1/4] and
// [3/4, 1], which keeps the homotopy twice differentiable.
SuspensionPath contract_loop(int k);

// phi_t(x1, x2) = psi(x2, y)^{-1} psi(t + x2, y) with y = x1 - x2 omega,
// where psi(n + s, x) = psi^(n)(x) h(s, x + n omega) extends the loop
// contraction h to all times through the omega-rotation iterates of its
// endpoint.  The time-one map over the zero section recovers the endpoint
// cocycle, and periodicity in both torus coordinates is a consequence of
// the construction that tests verify rather than a wrap imposed on inputs.
class SuspendedFlow {
 public:
  SuspendedFlow(SuspensionPath path, double omega);

  double omega() const { return omega_; }

  // phi_t at unwrapped coordinates; periodicity in x1 and x2 is exact up
  // to rounding.
  GroupElement at_raw(double t, double x1, double x2) const;
  GroupElement at(double t, TorusPoint p) const { return at_raw(t, p.x1, p.x2); }

  // psi(time, x): the time-extended loop contraction itself.
  GroupElement path_value(double time, CirclePoint x) const;

  // The time-t section as a torus cocycle, partials by central finite
  // differences.
  TorusCocycle time_sample(double t) const;

 private:
  SuspensionPath path_;
  double omega_ = 0.0;
  RotationNumber rotation_;
};

SuspendedFlow suspend(SuspensionPath path, double omega);

// Degree transport from the suspension's circle endpoint to the sampled
// flow: lhs is the measured torus degree of phi_beta over the rotation by
// (omega beta, beta), rhs the endpoint degree scaled by (|beta|, |alpha|)
// with alpha = omega beta, and rel_gap the worst componentwise relative
// difference.
struct TransportReport {
  DegreePair lhs;
  DegreePair rhs;
  double rel_gap = 0.0;
};
TransportReport degree_transport_check(const SuspensionPath& psi, double omega, double beta,
                                       const std::vector<long long>& n_schedule, int grid1,
                                       int grid2);

}  // namespace su2dyn

#endif  // SU2DYN_FLOWS2D_HPP

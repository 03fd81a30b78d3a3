#ifndef SU2DYN_RENORM_HPP
#define SU2DYN_RENORM_HPP

// Golden-ratio renormalization of cocycles over the circle rotation.
//
// The circle is modeled as the interval [-a^2, a) with a the golden
// fraction (sqrt 5 - 1)/2, so a^2 + a = 1 and the rotation acts as
// T(u) = u + a on [-a^2, 0) and T(u) = u - a^2 on [0, a).  The first-return
// map of T to X = [-a^2, a^3) has return time 1 on [0, a^3) and 2 on
// [-a^2, 0), and the scaling M(u) = -a u conjugates that return map back to
// T itself.  The renormalization operator rewrites a cocycle phi over T as
//
//   (R phi)(u) = phi(M u)                     on [-a^2, 0),
//   (R phi)(u) = phi(M u) phi(T(M u))         on [0, a),
//
// with log-derivatives picking up the chain-rule factor -a per application.
// Iterating R turns short products into Fibonacci-length products of phi
// along the orbit, evaluated on exponentially shrinking intervals.
//
// States are lazy: an iterated state stores the base evaluator and a depth,
// and evaluation recurses through the two-branch rule on demand.  All
// branch classifications run in exact Q(sqrt 5) arithmetic; coordinates are
// converted to double only when the base cocycle is finally sampled.

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "su2dyn/cocycle.hpp"
#include "su2dyn/rotations.hpp"
#include "su2dyn/su2.hpp"

namespace su2dyn {

// A point outside the domain an operation classifies against.
struct OutOfDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Asymptotic checks demand a minimum (even) number of renormalization steps.
struct DepthTooSmallError : std::domain_error {
  using std::domain_error::domain_error;
};

// The interval model is self-similar only for the golden rotation number.
struct NotGoldenError : std::domain_error {
  using std::domain_error::domain_error;
};

// Value and right logarithmic derivative D phi phi^{-1} at one model point.
struct RenormSample {
  GroupElement value;
  AlgebraElement log_derivative;
};

// A cocycle over the interval model together with a number of
// renormalization steps applied to it.  Immutable and cheap to copy;
// evaluation is pure, so states are safe to share across threads.
class RenormState {
 public:
  // Depth-0 state backed by a cocycle over the circle; the model point u is
  // read at the circle coordinate u mod 1.  The rotation argument is a
  // domain guard: anything but the golden rotation number is rejected with
  // NotGoldenError.
  static RenormState from_cocycle(const Cocycle& base, const RotationNumber& rotation);

  // The piecewise family v(u) = e^{a u A} B on [-a^2, 0), e^{u A} C on
  // [0, a), which solves the self-similarity equation exactly when A, B, C
  // commute.  Non-commuting inputs are rejected with invalid_argument.
  static RenormState fixed_family(const AlgebraElement& generator,
                                  const GroupElement& left_factor,
                                  const GroupElement& right_factor);

  // Number of renormalization steps applied on top of the base.
  int depth() const { return depth_; }

  // The golden fraction the model is built on, exactly.
  const QuadraticIrrational& alpha_exact() const;

  // Branch value and log-derivative at a model point u in [-a^2, a), with
  // the branch word resolved recursively.  Throws OutOfDomainError outside
  // the model interval.
  RenormSample evaluate(const QuadraticIrrational& u) const;
  GroupElement value(const QuadraticIrrational& u) const { return evaluate(u).value; }
  AlgebraElement log_derivative(const QuadraticIrrational& u) const {
    return evaluate(u).log_derivative;
  }

  // One-sided limit of the branch data at u, resolved exactly: the scaling
  // step flips the approach side, the rotation step preserves it, and zero
  // classifies onto the left branch only when approached from below.
  // Admits u in (-a^2, a] from below and u in [-a^2, a) from above.
  RenormSample evaluate_limit(const QuadraticIrrational& u, bool from_below) const;

  // True when the two-step product phi(u) phi(Tu) extends continuously
  // across u = 0, comparing the exact limits from the two sides.  This is
  // the subclass the renormalization preserves.
  bool w10_continuous(double tolerance = 1e-8) const;

  struct Impl;

 private:
  friend RenormState renorm_apply(const RenormState& state);
  RenormState(std::shared_ptr<const Impl> impl, int depth)
      : impl_(std::move(impl)), depth_(depth) {}
  std::shared_ptr<const Impl> impl_;
  int depth_ = 0;
};

// Return time of the first-return map to X = [-a^2, a^3): 1 on [0, a^3), 2
// on [-a^2, 0).  Throws OutOfDomainError off X.
int return_time(const QuadraticIrrational& u);

// One renormalization step; the result evaluates through the two-branch
// rule at depth + 1.
RenormState renorm_apply(const RenormState& state);

// n successive renormalization steps, n >= 1.
RenormState renorm_iterate(const RenormState& state, int n);

// Mean of the log-derivative norm over the model interval, quadrature with
// about grid_size midpoint cells split between the branches in proportion
// to their lengths.  Non-increasing under renorm_apply.
double l1_log_derivative_norm(const RenormState& state, int grid_size);

// Grid means of the log-derivative over [-a^2, 0) and [0, a), in that
// order.  At large even depths these approach the two branch limits of the
// renormalization, whose norms differ by the exact factor a.
std::pair<AlgebraElement, AlgebraElement> branch_mean_log_derivatives(const RenormState& state,
                                                                      int grid_size);

// Grid maximum over u in [-a^2, 0) of
// || phi~(u) - a Ad_{phi(u)} phi~(Tu) ||, the defect in the self-similarity
// equation a renormalization fixed point satisfies branchwise.
double fixed_point_residual(const RenormState& state, int grid_size = 256);

// Degree of a cocycle over the golden rotation, with the distance to the
// nearest point of the quantized set 2 pi {0, 1, 2, ...}.
struct QuantizationReport {
  double degree = 0.0;
  double nearest_multiple = 0.0;
  double gap = 0.0;
};
QuantizationReport quantization_check(const Cocycle& phi, const std::vector<long long>& n_schedule,
                                      int grid_size);

// Branch-averaged log-derivatives of a deeply renormalized state and the
// ratio test against the limit geometry: the left and right branch means
// settle on a common direction with norms in the exact ratio a.
struct ConsistencyReport {
  AlgebraElement left_limit;
  AlgebraElement right_limit;
  double ratio = 0.0;       // ||left|| / ||right||
  bool ratio_ok = false;    // within 5% of a (vacuously true when degenerate)
  bool degenerate = false;  // both branch means vanish
};
ConsistencyReport consistency_limit_check(const RenormState& state, int grid_size = 256);

}  // namespace su2dyn

#endif  // SU2DYN_RENORM_HPP

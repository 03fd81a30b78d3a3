#include "su2dyn/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>

#include "su2dyn/parallel.hpp"

namespace su2dyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const QuadraticIrrational& qi_alpha() {
  static const QuadraticIrrational a = QuadraticIrrational::golden();
  return a;
}

const QuadraticIrrational& qi_alpha_sq() {
  // a^2 = 1 - a, exactly.
  static const QuadraticIrrational s = QuadraticIrrational(1) - QuadraticIrrational::golden();
  return s;
}

const QuadraticIrrational& qi_alpha_cube() {
  static const QuadraticIrrational c = qi_alpha() * qi_alpha_sq();
  return c;
}

double alpha_value() {
  static const double a = qi_alpha().to_double();
  return a;
}

bool in_model_interval(const QuadraticIrrational& u) {
  return -qi_alpha_sq() <= u && u < qi_alpha();
}

// Midpoint grid on [lo, lo + length), built in exact coordinates.
QuadraticIrrational midpoint(const QuadraticIrrational& lo, const QuadraticIrrational& length,
                             int i, int cells) {
  const QuadraticIrrational t(Rational(2 * i + 1, 2 * cells), Rational(0));
  return lo + length * t;
}

AlgebraElement component_mean(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<double>& c) {
  return {parallel::pairwise_mean(a), parallel::pairwise_mean(b), parallel::pairwise_mean(c)};
}

}  // namespace

struct RenormState::Impl {
  // Approach side a point is evaluated from; exact evaluation uses At.
  enum class Side { Below, At, Above };
  std::function<RenormSample(const QuadraticIrrational&, Side)> base;
};

namespace {

using Side = RenormState::Impl::Side;

Side flip(Side s) {
  if (s == Side::Below) return Side::Above;
  return s == Side::Above ? Side::Below : Side::At;
}

// Left branch holds the points below zero, and zero itself exactly when
// approached from below.
bool on_left_branch(const QuadraticIrrational& u, Side side) {
  const int s = u.sign();
  return s != 0 ? s < 0 : side == Side::Below;
}

// Recursive two-branch evaluation.  One renormalization step reads the
// previous state at M u = -a u, and on the right branch also at T(M u);
// log-derivatives pick up the chain-rule factor -a per step.  The branch
// word is never materialized, it is exactly this call tree.  The approach
// side rides along so one-sided limits at the cuts stay exact: M reverses
// orientation, T preserves it.
RenormSample evaluate_branch(const RenormState::Impl& impl, int depth,
                             const QuadraticIrrational& u, Side side) {
  if (depth == 0) return impl.base(u, side);
  const QuadraticIrrational y = -(qi_alpha() * u);
  const Side y_side = flip(side);
  RenormSample head = evaluate_branch(impl, depth - 1, y, y_side);
  if (on_left_branch(u, side)) {
    head.log_derivative = head.log_derivative * -alpha_value();
    return head;
  }
  const QuadraticIrrational ty =
      on_left_branch(y, y_side) ? y + qi_alpha() : y - qi_alpha_sq();
  const RenormSample tail = evaluate_branch(impl, depth - 1, ty, y_side);
  RenormSample out;
  out.value = head.value * tail.value;
  out.log_derivative =
      (head.log_derivative + adjoint(head.value, tail.log_derivative)) * -alpha_value();
  return out;
}

}  // namespace

RenormState RenormState::from_cocycle(const Cocycle& base, const RotationNumber& rotation) {
  if (!rotation.is_golden())
    throw NotGoldenError("renormalization requires the golden rotation number");
  auto impl = std::make_shared<Impl>();
  // Circle cocycles are continuous at the model cuts, so the approach side
  // never changes the sample.
  impl->base = [base](const QuadraticIrrational& u, Impl::Side) -> RenormSample {
    const auto [value, logd] = base.value_and_log_derivative(CirclePoint(u.to_double()));
    return {value, logd};
  };
  return RenormState(std::move(impl), 0);
}

RenormState RenormState::fixed_family(const AlgebraElement& generator,
                                      const GroupElement& left_factor,
                                      const GroupElement& right_factor) {
  const double scale = 1.0 + norm(generator);
  if (norm(adjoint(left_factor, generator) - generator) > 1e-12 * scale ||
      norm(adjoint(right_factor, generator) - generator) > 1e-12 * scale ||
      distance(left_factor * right_factor, right_factor * left_factor) > 1e-12)
    throw std::invalid_argument("fixed_family needs commuting generator and factors");
  auto impl = std::make_shared<Impl>();
  impl->base = [generator, left_factor, right_factor](const QuadraticIrrational& u,
                                                      Impl::Side side) -> RenormSample {
    const double x = u.to_double();
    if (on_left_branch(u, side))
      return {exponential(generator * (alpha_value() * x)) * left_factor,
              generator * alpha_value()};
    return {exponential(generator * x) * right_factor, generator};
  };
  return RenormState(std::move(impl), 0);
}

const QuadraticIrrational& RenormState::alpha_exact() const { return qi_alpha(); }

RenormSample RenormState::evaluate(const QuadraticIrrational& u) const {
  if (!in_model_interval(u))
    throw OutOfDomainError("renormalization states live on [-alpha^2, alpha)");
  return evaluate_branch(*impl_, depth_, u, Impl::Side::At);
}

RenormSample RenormState::evaluate_limit(const QuadraticIrrational& u, bool from_below) const {
  const bool lower_ok = from_below ? -qi_alpha_sq() < u : -qi_alpha_sq() <= u;
  const bool upper_ok = from_below ? u <= qi_alpha() : u < qi_alpha();
  if (!lower_ok || !upper_ok)
    throw OutOfDomainError("one-sided limits exist on (-alpha^2, alpha] and [-alpha^2, alpha)");
  return evaluate_branch(*impl_, depth_, u,
                         from_below ? Impl::Side::Below : Impl::Side::Above);
}

bool RenormState::w10_continuous(double tolerance) const {
  // Two-step product phi(u) phi(Tu) approaching 0 from the left (where
  // Tu -> a) against its limit from the right (where Tu -> -a^2).  Both
  // sides are limits, so the verdict is a property of the cocycle up to
  // its measure-zero endpoint values, and it is stable under renorm_apply.
  const GroupElement left = evaluate_limit(QuadraticIrrational(0), true).value *
                            evaluate_limit(qi_alpha(), true).value;
  const GroupElement right =
      evaluate_limit(QuadraticIrrational(0), false).value * value(-qi_alpha_sq());
  return distance(left, right) < tolerance;
}

int return_time(const QuadraticIrrational& u) {
  if (u < -qi_alpha_sq() || qi_alpha_cube() <= u)
    throw OutOfDomainError("return_time is defined on [-alpha^2, alpha^3)");
  return u.sign() < 0 ? 2 : 1;
}

RenormState renorm_apply(const RenormState& state) {
  // Same base evaluator, one more recursion level.
  return RenormState(state.impl_, state.depth_ + 1);
}

RenormState renorm_iterate(const RenormState& state, int n) {
  if (n < 1) throw std::invalid_argument("renorm_iterate needs n >= 1");
  RenormState out = state;
  for (int i = 0; i < n; ++i) out = renorm_apply(out);
  return out;
}

double l1_log_derivative_norm(const RenormState& state, int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("grid_size must be positive");
  // Cells split between the branches in proportion to their lengths a^2 and
  // a, so each branch integrand stays smooth over its own cells.
  const int left_cells =
      std::max(1, static_cast<int>(std::lround(grid_size * (1.0 - alpha_value()))));
  const int right_cells = std::max(1, grid_size - left_cells);
  std::vector<double> left_norms(static_cast<std::size_t>(left_cells));
  std::vector<double> right_norms(static_cast<std::size_t>(right_cells));
  parallel::for_each_index(left_norms.size(), [&](std::size_t i) {
    const QuadraticIrrational u =
        midpoint(-qi_alpha_sq(), qi_alpha_sq(), static_cast<int>(i), left_cells);
    left_norms[i] = norm(state.log_derivative(u));
  });
  parallel::for_each_index(right_norms.size(), [&](std::size_t i) {
    const QuadraticIrrational u =
        midpoint(QuadraticIrrational(0), qi_alpha(), static_cast<int>(i), right_cells);
    right_norms[i] = norm(state.log_derivative(u));
  });
  // Branch lengths sum to 1, so the weighted means form the interval mean.
  return (1.0 - alpha_value()) * parallel::pairwise_mean(left_norms) +
         alpha_value() * parallel::pairwise_mean(right_norms);
}

std::pair<AlgebraElement, AlgebraElement> branch_mean_log_derivatives(const RenormState& state,
                                                                      int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("grid_size must be positive");
  const std::size_t cells = static_cast<std::size_t>(grid_size);
  std::vector<double> a(cells), b(cells), c(cells);
  const auto fill = [&](const QuadraticIrrational& lo, const QuadraticIrrational& length) {
    parallel::for_each_index(cells, [&](std::size_t i) {
      const AlgebraElement v =
          state.log_derivative(midpoint(lo, length, static_cast<int>(i), grid_size));
      a[i] = v.a;
      b[i] = v.b;
      c[i] = v.c;
    });
    return component_mean(a, b, c);
  };
  const AlgebraElement left = fill(-qi_alpha_sq(), qi_alpha_sq());
  const AlgebraElement right = fill(QuadraticIrrational(0), qi_alpha());
  return {left, right};
}

double fixed_point_residual(const RenormState& state, int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("grid_size must be positive");
  std::vector<double> defect(static_cast<std::size_t>(grid_size));
  parallel::for_each_index(defect.size(), [&](std::size_t i) {
    const QuadraticIrrational u =
        midpoint(-qi_alpha_sq(), qi_alpha_sq(), static_cast<int>(i), grid_size);
    const RenormSample here = state.evaluate(u);
    const AlgebraElement there = state.log_derivative(u + qi_alpha());
    defect[i] =
        norm(here.log_derivative - alpha_value() * adjoint(here.value, there));
  });
  double worst = 0.0;
  for (double d : defect) worst = std::max(worst, d);
  return worst;
}

QuantizationReport quantization_check(const Cocycle& phi, const std::vector<long long>& n_schedule,
                                      int grid_size) {
  const DegreeReport report = degree(phi, RotationNumber::golden(), n_schedule, grid_size);
  QuantizationReport out;
  out.degree = report.extrapolated;
  out.nearest_multiple = kTwoPi * std::round(out.degree / kTwoPi);
  out.gap = std::abs(out.degree - out.nearest_multiple);
  return out;
}

ConsistencyReport consistency_limit_check(const RenormState& state, int grid_size) {
  if (state.depth() < 10 || state.depth() % 2 != 0)
    throw DepthTooSmallError("consistency limits need an even depth of at least 10");
  const auto [left, right] = branch_mean_log_derivatives(state, grid_size);
  ConsistencyReport out;
  out.left_limit = left;
  out.right_limit = right;
  const double left_norm = norm(left);
  const double right_norm = norm(right);
  out.degenerate = left_norm < 1e-12 && right_norm < 1e-12;
  if (out.degenerate) {
    out.ratio_ok = true;
    return out;
  }
  out.ratio = right_norm == 0.0 ? std::numeric_limits<double>::infinity()
                                : left_norm / right_norm;
  out.ratio_ok = std::abs(out.ratio / alpha_value() - 1.0) <= 0.05;
  return out;
}

}  // namespace su2dyn

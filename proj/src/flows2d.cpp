#include "su2dyn/flows2d.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "su2dyn/parallel.hpp"

namespace su2dyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFdStep = 1e-5;

// Principal logarithm of a group element, the inverse of exponential on
// everything but the antipode -Id (which finite differences never reach).
AlgebraElement su2_log(const GroupElement& g) {
  const double p = g.z1().imag();
  const double q = g.z2().real();
  const double r = g.z2().imag();
  const double s = std::sqrt(p * p + q * q + r * r);
  if (s == 0.0) return {0.0, 0.0, 0.0};
  const double f = std::atan2(s, g.z1().real()) / s;
  return {f * p, f * q, f * r};
}

AlgebraElement fd_partial(const std::function<GroupElement(TorusPoint)>& value, TorusPoint p,
                          bool along_x1) {
  const double d1 = along_x1 ? kFdStep : 0.0;
  const double d2 = along_x1 ? 0.0 : kFdStep;
  const GroupElement forward = value(TorusPoint(p.x1 + d1, p.x2 + d2));
  const GroupElement backward = value(TorusPoint(p.x1 - d1, p.x2 - d2));
  return su2_log(forward * backward.inverse()) * (1.0 / (2.0 * kFdStep));
}

void require_torus_schedule(const std::vector<long long>& n_schedule) {
  if (n_schedule.empty()) throw std::invalid_argument("torus_degree needs a nonempty schedule");
  for (std::size_t k = 0; k < n_schedule.size(); ++k) {
    if (n_schedule[k] < 1 || (k > 0 && n_schedule[k] <= n_schedule[k - 1]))
      throw std::invalid_argument("torus_degree schedule must be increasing and positive");
  }
}

double aitken_tail(const std::vector<double>& estimates) {
  double out = estimates.back();
  if (estimates.size() >= 3) {
    const double e1 = estimates[estimates.size() - 3];
    const double e2 = estimates[estimates.size() - 2];
    const double e3 = estimates.back();
    const double den = e3 - 2.0 * e2 + e1;
    if (std::abs(den) > 1e-12) out = e3 - (e3 - e2) * (e3 - e2) / den;
  }
  return out;
}

// Quintic smoothstep reparametrized to be flat on [0, 1/4] and [3/4, 1]:
// value and first two derivatives vanish at the seams, so homotopies built
// on it glue twice differentiably.
double sweep_clamp(double s) {
  if (s <= 0.25) return 0.0;
  if (s >= 0.75) return 1.0;
  const double u = (s - 0.25) * 2.0;
  return u * u * u * (10.0 + u * (6.0 * u - 15.0));
}

}  // namespace

TorusCocycle torus_constant(const GroupElement& g) {
  TorusCocycle out;
  out.value = [g](TorusPoint) { return g; };
  out.d1_log_derivative = [](TorusPoint) { return AlgebraElement{0.0, 0.0, 0.0}; };
  out.d2_log_derivative = [](TorusPoint) { return AlgebraElement{0.0, 0.0, 0.0}; };
  out.smoothness = TorusCocycle::Smoothness::C2;
  return out;
}

TorusCocycle torus_diagonal(int winding1, int winding2) {
  TorusCocycle out;
  out.value = [winding1, winding2](TorusPoint p) {
    const double theta = kTwoPi * (winding1 * p.x1 + winding2 * p.x2);
    return exponential(AlgebraElement{theta, 0.0, 0.0});
  };
  out.d1_log_derivative = [winding1](TorusPoint) {
    return AlgebraElement{kTwoPi * winding1, 0.0, 0.0};
  };
  out.d2_log_derivative = [winding2](TorusPoint) {
    return AlgebraElement{kTwoPi * winding2, 0.0, 0.0};
  };
  out.smoothness = TorusCocycle::Smoothness::C2;
  return out;
}

TorusCocycle torus_from_value(std::function<GroupElement(TorusPoint)> value,
                              TorusCocycle::Smoothness smoothness) {
  if (!value) throw std::invalid_argument("torus_from_value needs a value map");
  TorusCocycle out;
  out.value = value;
  out.d1_log_derivative = [value](TorusPoint p) { return fd_partial(value, p, true); };
  out.d2_log_derivative = [value](TorusPoint p) { return fd_partial(value, p, false); };
  out.smoothness = smoothness;
  return out;
}

DegreePair torus_degree(const TorusCocycle& phi, double alpha, double beta,
                        const std::vector<long long>& n_schedule, int grid1, int grid2) {
  require_torus_schedule(n_schedule);
  if (grid1 < 1 || grid2 < 1) throw std::invalid_argument("grid sizes must be positive");
  const long long n_max = n_schedule.back();
  const std::size_t npts = static_cast<std::size_t>(grid1) * static_cast<std::size_t>(grid2);
  const std::size_t slots = n_schedule.size();
  std::vector<std::vector<double>> norms1(slots, std::vector<double>(npts));
  std::vector<std::vector<double>> norms2(slots, std::vector<double>(npts));

  parallel::for_each_index(npts, [&](std::size_t idx) {
    const double x1 = static_cast<double>(idx / static_cast<std::size_t>(grid2)) / grid1;
    const double x2 = static_cast<double>(idx % static_cast<std::size_t>(grid2)) / grid2;
    GroupElement g;
    AlgebraElement sum1, sum2;
    std::size_t slot = 0;
    for (long long j = 0; j < n_max; ++j) {
      const TorusPoint q(x1 + frac_mul(j, alpha), x2 + frac_mul(j, beta));
      sum1 += adjoint(g, phi.d1_log_derivative(q));
      sum2 += adjoint(g, phi.d2_log_derivative(q));
      g = g * phi.value(q);
      if (j + 1 == n_schedule[slot]) {
        norms1[slot][idx] = norm(sum1) / static_cast<double>(j + 1);
        norms2[slot][idx] = norm(sum2) / static_cast<double>(j + 1);
        ++slot;
      }
    }
  });

  std::vector<double> means1(slots), means2(slots);
  for (std::size_t k = 0; k < slots; ++k) {
    means1[k] = parallel::pairwise_mean(norms1[k]);
    means2[k] = parallel::pairwise_mean(norms2[k]);
  }
  DegreePair out;
  out.d1 = std::max(0.0, aitken_tail(means1));
  out.d2 = std::max(0.0, aitken_tail(means2));
  return out;
}

GroupElement flow_integrate(const FlowCocycle& fc, TorusPoint p, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("flow_integrate needs steps >= 1");
  if (!fc.generator) throw std::invalid_argument("flow_integrate needs a generator field");
  // Commutator-free fourth order: two exponentials per step, Gauss nodes,
  // cross-weighted so the leading commutator of the Magnus series is
  // reproduced.  For the right-invariant system the factors multiply on
  // the right in node order.
  constexpr double kNode1 = 0.5 - std::numbers::sqrt3 / 6.0;
  constexpr double kNode2 = 0.5 + std::numbers::sqrt3 / 6.0;
  constexpr double kWeight1 = 0.25 + std::numbers::sqrt3 / 6.0;
  constexpr double kWeight2 = 0.25 - std::numbers::sqrt3 / 6.0;
  const double h = t / steps;
  GroupElement y;
  for (int i = 0; i < steps; ++i) {
    const double base = h * i;
    const AlgebraElement a1 = fc.generator(flow_advance(p, fc.omega, base + kNode1 * h));
    const AlgebraElement a2 = fc.generator(flow_advance(p, fc.omega, base + kNode2 * h));
    y = y * exponential((a1 * kWeight1 + a2 * kWeight2) * h) *
        exponential((a1 * kWeight2 + a2 * kWeight1) * h);
  }
  return y;
}

SuspensionPath contract_loop(int k) {
  if (k < 1) throw std::invalid_argument("contract_loop needs k >= 1");
  auto homotopy = [k](double s, CirclePoint x) {
    const double theta = std::numbers::pi * k * x.x;
    const double swept = std::numbers::pi * sweep_clamp(s);
    // Diagonal axis against a sweeping axis that starts opposite to it:
    // the factors cancel at s = 0 and stack into the degree-k diagonal
    // loop at s = 1.
    const AlgebraElement fixed{theta, 0.0, 0.0};
    const AlgebraElement sweeping{-theta * std::cos(swept), theta * std::sin(swept), 0.0};
    return exponential(fixed) * exponential(sweeping);
  };
  return SuspensionPath{std::move(homotopy), Cocycle::diagonal(k)};
}

SuspendedFlow::SuspendedFlow(SuspensionPath path, double omega)
    : path_(std::move(path)), omega_(omega), rotation_(RotationNumber::from_double(omega)) {}

GroupElement SuspendedFlow::path_value(double time, CirclePoint x) const {
  const double whole = std::floor(time);
  const long long n = static_cast<long long>(whole);
  return iterate(path_.end, rotation_, n, x) *
         path_.homotopy(time - whole, rotate(x, rotation_, n));
}

GroupElement SuspendedFlow::at_raw(double t, double x1, double x2) const {
  const CirclePoint y(x1 - x2 * omega_);
  return path_value(x2, y).inverse() * path_value(t + x2, y);
}

TorusCocycle SuspendedFlow::time_sample(double t) const {
  return torus_from_value([flow = *this, t](TorusPoint p) { return flow.at(t, p); },
                          TorusCocycle::Smoothness::C2);
}

SuspendedFlow suspend(SuspensionPath path, double omega) {
  return SuspendedFlow(std::move(path), omega);
}

TransportReport degree_transport_check(const SuspensionPath& psi, double omega, double beta,
                                       const std::vector<long long>& n_schedule, int grid1,
                                       int grid2) {
  const double alpha = omega * beta;
  const SuspendedFlow flow = suspend(psi, omega);
  TransportReport out;
  out.lhs = torus_degree(flow.time_sample(beta), alpha, beta, n_schedule, grid1, grid2);
  const double end_degree =
      degree(psi.end, RotationNumber::from_double(omega), n_schedule, grid1 * grid2)
          .extrapolated;
  out.rhs = {std::abs(beta) * end_degree, std::abs(alpha) * end_degree};
  const auto component_gap = [](double lhs, double rhs) {
    if (std::abs(lhs) < 1e-12 && std::abs(rhs) < 1e-12) return 0.0;
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
  };
  out.rel_gap = std::max(component_gap(out.lhs.d1, out.rhs.d1),
                         component_gap(out.lhs.d2, out.rhs.d2));
  return out;
}

}  // namespace su2dyn

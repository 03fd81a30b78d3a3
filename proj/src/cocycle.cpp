#include "su2dyn/cocycle.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "su2dyn/parallel.hpp"

namespace su2dyn {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

namespace {

// Bernoulli polynomial B4 on [0,1); its 1-periodic extension matches value,
// first, and second derivative across the seam while the third derivative
// jumps by -24.
double bernoulli4(double u) { return ((u - 2.0) * u + 1.0) * u * u - 1.0 / 30.0; }
double bernoulli4_d1(double u) { return ((4.0 * u - 6.0) * u + 2.0) * u; }
double bernoulli4_d2(double u) { return (12.0 * u - 12.0) * u + 2.0; }

double frac_arg(double j, double x) {
  const double p = j * x;
  return p - std::floor(p);
}

}  // namespace

double TrigPoly::value(double x) const {
  double s = constant;
  for (std::size_t j = 0; j < cos_coeff.size(); ++j) {
    s += cos_coeff[j] * std::cos(kTwoPi * static_cast<double>(j + 1) * x);
  }
  for (std::size_t j = 0; j < sin_coeff.size(); ++j) {
    s += sin_coeff[j] * std::sin(kTwoPi * static_cast<double>(j + 1) * x);
  }
  for (std::size_t j = 0; j < bernoulli4_coeff.size(); ++j) {
    s += bernoulli4_coeff[j] * bernoulli4(frac_arg(static_cast<double>(j + 1), x));
  }
  return s;
}

double TrigPoly::derivative(double x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < cos_coeff.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(j + 1);
    s -= cos_coeff[j] * w * std::sin(w * x);
  }
  for (std::size_t j = 0; j < sin_coeff.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(j + 1);
    s += sin_coeff[j] * w * std::cos(w * x);
  }
  for (std::size_t j = 0; j < bernoulli4_coeff.size(); ++j) {
    const double w = static_cast<double>(j + 1);
    s += bernoulli4_coeff[j] * w * bernoulli4_d1(frac_arg(w, x));
  }
  return s;
}

double TrigPoly::second_derivative(double x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < cos_coeff.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(j + 1);
    s -= cos_coeff[j] * w * w * std::cos(w * x);
  }
  for (std::size_t j = 0; j < sin_coeff.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(j + 1);
    s -= sin_coeff[j] * w * w * std::sin(w * x);
  }
  for (std::size_t j = 0; j < bernoulli4_coeff.size(); ++j) {
    const double w = static_cast<double>(j + 1);
    s += bernoulli4_coeff[j] * w * w * bernoulli4_d2(frac_arg(w, x));
  }
  return s;
}

Conjugator& Conjugator::add_factor(TrigPoly exponent, AlgebraElement direction) {
  factors_.emplace_back(std::move(exponent), direction);
  return *this;
}

GroupElement Conjugator::value(double x) const {
  GroupElement q;
  for (const auto& [f, w] : factors_) {
    q = q * exponential(w * f.value(x));
  }
  return q;
}

Conjugator::Logs Conjugator::value_and_logs(double x) const {
  // With prefix products P_i = exp(f_1 W_1) ... exp(f_i W_i),
  //   Dq q^{-1}  = sum_i Ad_{P_{i-1}} (f_i' W_i)
  // and differentiating each conjugated term once more gives
  //   D(Dq q^{-1}) = sum_i Ad_{P_{i-1}} (f_i'' W_i) + [S_{i-1}, term_i]
  // where S_{i-1} is the partial sum of the earlier terms.
  Logs out;
  for (const auto& [f, w] : factors_) {
    const AlgebraElement term = adjoint(out.q, w * f.derivative(x));
    out.ddq += adjoint(out.q, w * f.second_derivative(x)) + commutator(out.dq, term);
    out.dq += term;
    out.q = out.q * exponential(w * f.value(x));
  }
  return out;
}

struct Cocycle::Impl {
  Smoothness smooth;
  Backing back;
  Impl(Smoothness s, Backing b) : smooth(s), back(b) {}
  virtual ~Impl() = default;
  virtual GroupElement value(CirclePoint x) const = 0;
  virtual AlgebraElement log_derivative(CirclePoint x) const = 0;
  virtual AlgebraElement log_derivative_prime(CirclePoint) const {
    throw NotC2Error("cocycle backing carries no second-derivative data");
  }
  virtual std::pair<GroupElement, AlgebraElement> value_and_log_derivative(
      CirclePoint x) const {
    return {value(x), log_derivative(x)};
  }
};

GroupElement Cocycle::value(CirclePoint x) const { return impl_->value(x); }
AlgebraElement Cocycle::log_derivative(CirclePoint x) const {
  return impl_->log_derivative(x);
}
AlgebraElement Cocycle::log_derivative_prime(CirclePoint x) const {
  return impl_->log_derivative_prime(x);
}
std::pair<GroupElement, AlgebraElement> Cocycle::value_and_log_derivative(
    CirclePoint x) const {
  return impl_->value_and_log_derivative(x);
}
Cocycle::Smoothness Cocycle::smoothness() const { return impl_->smooth; }
Cocycle::Backing Cocycle::backing() const { return impl_->back; }

namespace {

struct ConstantImpl final : Cocycle::Impl {
  GroupElement g;
  explicit ConstantImpl(const GroupElement& g_)
      : Impl(Cocycle::Smoothness::C2, Cocycle::Backing::ClosedForm), g(g_) {}
  GroupElement value(CirclePoint) const override { return g; }
  AlgebraElement log_derivative(CirclePoint) const override { return {}; }
  AlgebraElement log_derivative_prime(CirclePoint) const override { return {}; }
};

struct DiagonalImpl final : Cocycle::Impl {
  int winding;
  TrigPoly phase;
  DiagonalImpl(int k, TrigPoly p)
      : Impl(Cocycle::Smoothness::C2, Cocycle::Backing::DiagonalFourier),
        winding(k),
        phase(std::move(p)) {}
  GroupElement value(CirclePoint x) const override {
    const double theta = kTwoPi * winding * x.x + phase.value(x.x);
    return GroupElement(std::polar(1.0, theta), std::complex<double>(0.0, 0.0));
  }
  AlgebraElement log_derivative(CirclePoint x) const override {
    return {kTwoPi * winding + phase.derivative(x.x), 0.0, 0.0};
  }
  AlgebraElement log_derivative_prime(CirclePoint x) const override {
    return {phase.second_derivative(x.x), 0.0, 0.0};
  }
};

struct ConjugatedImpl final : Cocycle::Impl {
  Cocycle base;
  Conjugator q;
  RotationNumber alpha;
  ConjugatedImpl(Cocycle base_, Conjugator q_, RotationNumber alpha_)
      : Impl(base_.smoothness(), Cocycle::Backing::ClosedForm),
        base(std::move(base_)),
        q(std::move(q_)),
        alpha(std::move(alpha_)) {}

  GroupElement value(CirclePoint x) const override {
    const CirclePoint tx = rotate(x, alpha);
    return q.value(x.x).inverse() * base.value(x) * q.value(tx.x);
  }

  // For phi = q^{-1} . delta . (q o T), the product rule for right
  // logarithmic derivatives gives
  //   phi~  = Ad_{q^{-1}} Y,          Y  = -q~ + delta~ + Ad_delta (q~ o T),
  //   phi~' = Ad_{q^{-1}} (Y' - [q~, Y]),
  //   Y' = -q~' + delta~' + Ad_delta (q~' o T) + [delta~, Ad_delta (q~ o T)].
  AlgebraElement log_derivative(CirclePoint x) const override {
    const CirclePoint tx = rotate(x, alpha);
    const Conjugator::Logs here = q.value_and_logs(x.x);
    const AlgebraElement qt = q.value_and_logs(tx.x).dq;
    const auto [delta, delta_log] = base.value_and_log_derivative(x);
    const AlgebraElement y = delta_log - here.dq + adjoint(delta, qt);
    return adjoint(here.q.inverse(), y);
  }

  AlgebraElement log_derivative_prime(CirclePoint x) const override {
    const CirclePoint tx = rotate(x, alpha);
    const Conjugator::Logs here = q.value_and_logs(x.x);
    const Conjugator::Logs there = q.value_and_logs(tx.x);
    const auto [delta, delta_log] = base.value_and_log_derivative(x);
    const AlgebraElement carried = adjoint(delta, there.dq);
    const AlgebraElement y = delta_log - here.dq + carried;
    const AlgebraElement yp = base.log_derivative_prime(x) - here.ddq +
                              adjoint(delta, there.ddq) + commutator(delta_log, carried);
    return adjoint(here.q.inverse(), yp - commutator(here.dq, y));
  }

  std::pair<GroupElement, AlgebraElement> value_and_log_derivative(
      CirclePoint x) const override {
    const CirclePoint tx = rotate(x, alpha);
    const Conjugator::Logs here = q.value_and_logs(x.x);
    const Conjugator::Logs there = q.value_and_logs(tx.x);
    const auto [delta, delta_log] = base.value_and_log_derivative(x);
    const AlgebraElement y = delta_log - here.dq + adjoint(delta, there.dq);
    const GroupElement qinv = here.q.inverse();
    return {qinv * delta * there.q, adjoint(qinv, y)};
  }
};

struct SplineImpl final : Cocycle::Impl {
  // Samples stored as quaternion 4-vectors (Re z1, Im z1, Re z2, Im z2);
  // Catmull-Rom through them, then projection back to the unit sphere.
  std::vector<std::array<double, 4>> pts;

  explicit SplineImpl(const std::vector<GroupElement>& samples)
      : Impl(Cocycle::Smoothness::C1, Cocycle::Backing::GridSpline) {
    pts.reserve(samples.size());
    for (const GroupElement& g : samples) {
      pts.push_back({g.z1().real(), g.z1().imag(), g.z2().real(), g.z2().imag()});
    }
  }

  struct Curve {
    std::array<double, 4> s;   // interpolated 4-vector
    std::array<double, 4> ds;  // its derivative in x
  };

  Curve curve(CirclePoint x) const {
    const auto n = static_cast<double>(pts.size());
    const double scaled = x.x * n;
    auto i1 = static_cast<std::size_t>(scaled);
    if (i1 >= pts.size()) i1 = pts.size() - 1;  // guards x.x rounding to 1.0
    const double t = scaled - static_cast<double>(i1);
    const std::size_t m = pts.size();
    const auto& p0 = pts[(i1 + m - 1) % m];
    const auto& p1 = pts[i1];
    const auto& p2 = pts[(i1 + 1) % m];
    const auto& p3 = pts[(i1 + 2) % m];
    Curve out;
    for (int k = 0; k < 4; ++k) {
      const double c1 = 0.5 * (p2[k] - p0[k]);
      const double c2 = p0[k] - 2.5 * p1[k] + 2.0 * p2[k] - 0.5 * p3[k];
      const double c3 = 0.5 * (p3[k] - p0[k]) + 1.5 * (p1[k] - p2[k]);
      out.s[k] = p1[k] + t * (c1 + t * (c2 + t * c3));
      out.ds[k] = n * (c1 + t * (2.0 * c2 + t * 3.0 * c3));
    }
    return out;
  }

  GroupElement value(CirclePoint x) const override {
    const Curve c = curve(x);
    return GroupElement(std::complex<double>(c.s[0], c.s[1]),
                        std::complex<double>(c.s[2], c.s[3]));
  }

  AlgebraElement log_derivative(CirclePoint x) const override {
    const Curve c = curve(x);
    double nrm2 = 0.0, dot = 0.0;
    for (int k = 0; k < 4; ++k) {
      nrm2 += c.s[k] * c.s[k];
      dot += c.s[k] * c.ds[k];
    }
    const double nrm = std::sqrt(nrm2);
    // phi = s/|s|, so Dphi = s'/|s| - s (s.s')/|s|^3; then Dphi phi^{-1} in
    // quaternion components, keeping only the su(2) part (the real part is
    // zero because |phi| is constant).
    std::array<double, 4> dn;
    for (int k = 0; k < 4; ++k) {
      dn[k] = c.ds[k] / nrm - c.s[k] * dot / (nrm2 * nrm);
    }
    const std::complex<double> d1(dn[0], dn[1]), d2(dn[2], dn[3]);
    const std::complex<double> z1(c.s[0] / nrm, c.s[1] / nrm);
    const std::complex<double> z2(c.s[2] / nrm, c.s[3] / nrm);
    const std::complex<double> m1 = d1 * std::conj(z1) + d2 * std::conj(z2);
    const std::complex<double> m2 = d2 * z1 - d1 * z2;
    return {m1.imag(), m2.real(), m2.imag()};
  }
};

}  // namespace

Cocycle Cocycle::constant(const GroupElement& g) {
  return Cocycle(std::make_shared<ConstantImpl>(g));
}

Cocycle Cocycle::diagonal(int winding, TrigPoly phase) {
  return Cocycle(std::make_shared<DiagonalImpl>(winding, std::move(phase)));
}

Cocycle Cocycle::conjugated(const Cocycle& base, const Conjugator& q,
                            const RotationNumber& alpha) {
  return Cocycle(std::make_shared<ConjugatedImpl>(base, q, alpha));
}

Cocycle Cocycle::from_samples(std::vector<GroupElement> samples) {
  if (samples.size() < 4) {
    throw std::invalid_argument("from_samples needs at least four samples");
  }
  return Cocycle(std::make_shared<SplineImpl>(samples));
}

GroupElement iterate(const Cocycle& phi, const RotationNumber& alpha, long long n,
                     CirclePoint x) {
  if (n == 0) return GroupElement();
  if (n < 0) {
    // phi^(-m)(x) = (phi^(m)(T^{-m}x))^{-1}, forced by the cocycle identity.
    return iterate(phi, alpha, -n, rotate(x, alpha, n)).inverse();
  }
  GroupElement g;
  for (long long j = 0; j < n; ++j) {
    g = g * phi.value(rotate(x, alpha, j));
  }
  return g;
}

AlgebraElement transfer_operator_apply(const Cocycle& phi, const RotationNumber& alpha,
                                       const std::function<AlgebraElement(CirclePoint)>& f,
                                       long long n, CirclePoint x) {
  return adjoint(iterate(phi, alpha, n, x), f(rotate(x, alpha, n)));
}

namespace {

std::vector<CirclePoint> uniform_grid(int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("grid_size must be positive");
  std::vector<CirclePoint> grid;
  grid.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    grid.push_back(CirclePoint{static_cast<double>(i) / grid_size});
  }
  return grid;
}

}  // namespace

DerivativeAccumulation log_derivative_sum(const Cocycle& phi, const RotationNumber& alpha,
                                          long long n, int grid_size) {
  if (n < 1) throw std::invalid_argument("log_derivative_sum needs n >= 1");
  DerivativeAccumulation out;
  out.n = n;
  out.grid = uniform_grid(grid_size);
  out.values.resize(out.grid.size());
  parallel::for_each_index(out.grid.size(), [&](std::size_t i) {
    const CirclePoint x = out.grid[i];
    GroupElement g;
    AlgebraElement sum;
    for (long long j = 0; j < n; ++j) {
      const auto [gy, ld] = phi.value_and_log_derivative(rotate(x, alpha, j));
      sum += adjoint(g, ld);
      g = g * gy;
    }
    out.values[i] = sum * (1.0 / static_cast<double>(n));
  });
  return out;
}

DerivativeAccumulation second_log_derivative_sum(const Cocycle& phi,
                                                 const RotationNumber& alpha, long long n,
                                                 int grid_size) {
  if (n < 1) throw std::invalid_argument("second_log_derivative_sum needs n >= 1");
  if (phi.smoothness() != Cocycle::Smoothness::C2) {
    throw NotC2Error("second_log_derivative_sum needs a C2 cocycle");
  }
  DerivativeAccumulation out;
  out.n = n;
  out.grid = uniform_grid(grid_size);
  out.values.resize(out.grid.size());
  parallel::for_each_index(out.grid.size(), [&](std::size_t i) {
    const CirclePoint x = out.grid[i];
    GroupElement g;
    AlgebraElement running;  // R_k = sum_{j<k} U^j phi~
    AlgebraElement comm_total;
    AlgebraElement second_total;
    for (long long k = 0; k < n; ++k) {
      const CirclePoint y = rotate(x, alpha, k);
      const auto [gy, ld] = phi.value_and_log_derivative(y);
      const AlgebraElement u = adjoint(g, ld);
      comm_total += commutator(running, u);
      second_total += adjoint(g, phi.log_derivative_prime(y));
      running += u;
      g = g * gy;
    }
    out.values[i] = (comm_total + second_total) * (1.0 / (static_cast<double>(n) * n));
  });
  return out;
}

DegreeReport degree(const Cocycle& phi, const RotationNumber& alpha,
                    const std::vector<long long>& n_schedule, int grid_size) {
  if (n_schedule.empty()) throw std::invalid_argument("degree needs a nonempty schedule");
  for (std::size_t k = 0; k < n_schedule.size(); ++k) {
    if (n_schedule[k] < 1 || (k > 0 && n_schedule[k] <= n_schedule[k - 1])) {
      throw std::invalid_argument("degree schedule must be increasing and positive");
    }
  }
  const long long n_max = n_schedule.back();
  DegreeReport report;
  report.psi_field.n = n_max;
  report.psi_field.grid = uniform_grid(grid_size);
  const std::size_t npts = report.psi_field.grid.size();
  report.psi_field.values.resize(npts);
  std::vector<std::vector<double>> norms(n_schedule.size(), std::vector<double>(npts));
  std::vector<double> residuals(npts);

  parallel::for_each_index(npts, [&](std::size_t i) {
    const CirclePoint x = report.psi_field.grid[i];
    const AlgebraElement first = phi.log_derivative(x);
    GroupElement g;
    AlgebraElement sum;
    std::size_t slot = 0;
    for (long long j = 0; j < n_max; ++j) {
      const auto [gy, ld] = phi.value_and_log_derivative(rotate(x, alpha, j));
      sum += adjoint(g, ld);
      g = g * gy;
      if (j + 1 == n_schedule[slot]) {
        norms[slot][i] = norm(sum) / static_cast<double>(j + 1);
        ++slot;
      }
    }
    report.psi_field.values[i] = sum * (1.0 / static_cast<double>(n_max));
    // The defect of psi_n under phi(x) psi_n(Tx) phi(x)^{-1} = psi_n(x)
    // collapses algebraically to (1/n) (U^n phi~ - phi~), so it falls out of
    // the same forward pass.
    const AlgebraElement last = adjoint(g, phi.log_derivative(rotate(x, alpha, n_max)));
    residuals[i] = norm(last - first) / static_cast<double>(n_max);
  });

  for (std::size_t k = 0; k < n_schedule.size(); ++k) {
    report.estimates.emplace_back(n_schedule[k], parallel::pairwise_mean(norms[k]));
  }
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  report.residual = worst;

  // Aitken delta-squared on the last three estimates; fall back to the raw
  // tail value when the schedule is short or the differences cancel.
  report.extrapolated = report.estimates.back().second;
  if (report.estimates.size() >= 3) {
    const double e1 = report.estimates[report.estimates.size() - 3].second;
    const double e2 = report.estimates[report.estimates.size() - 2].second;
    const double e3 = report.estimates.back().second;
    const double den = e3 - 2.0 * e2 + e1;
    if (std::abs(den) > 1e-12) {
      report.extrapolated = e3 - (e3 - e2) * (e3 - e2) / den;
    }
  }
  return report;
}

TransferFunction transfer_function(const DerivativeAccumulation& psi, double degree_floor) {
  TransferFunction out;
  out.n = psi.n;
  out.grid = psi.grid;
  out.p_values.resize(psi.values.size());
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    if (norm(psi.values[i]) < degree_floor) {
      throw DegenerateFieldError("field norm below floor; degree is likely zero");
    }
    out.p_values[i] = diagonalizer(psi.values[i]);
  }
  return out;
}

DiagonalPart diagonal_part(const Cocycle& phi, const TransferFunction& p,
                           const RotationNumber& alpha) {
  DiagonalPart out;
  out.grid = p.grid;
  out.gamma.resize(p.grid.size());
  std::vector<double> leak(p.grid.size());
  parallel::for_each_index(p.grid.size(), [&](std::size_t i) {
    const CirclePoint x = p.grid[i];
    const CirclePoint tx = rotate(x, alpha);
    // psi at Tx comes from rerunning the accumulation there with the same n;
    // p is only measurable in general, so interpolating it across grid cells
    // would be unjustified.
    GroupElement g;
    AlgebraElement sum;
    for (long long j = 0; j < p.n; ++j) {
      const auto [gy, ld] = phi.value_and_log_derivative(rotate(tx, alpha, j));
      sum += adjoint(g, ld);
      g = g * gy;
    }
    const GroupElement p_tx = diagonalizer(sum * (1.0 / static_cast<double>(p.n)));
    const GroupElement delta = p.p_values[i] * phi.value(x) * p_tx.inverse();
    out.gamma[i] = delta.z1();
    leak[i] = std::abs(delta.z2());
  });
  for (double l : leak) out.leakage = std::max(out.leakage, l);
  if (out.leakage > 1e-3) {
    throw NotDiagonalError("conjugated product is not diagonal within tolerance");
  }
  return out;
}

}  // namespace su2dyn

#include "su2dyn/spectral.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "su2dyn/cocycle.hpp"
#include "su2dyn/irreps.hpp"

using namespace su2dyn;
using Cplx = std::complex<double>;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Diagonal base conjugated by a two-factor product, the standard smooth
// cocycle with degree 2 pi used across the suite.
Cocycle test_conjugated(int winding = 1) {
  TrigPoly f1;
  f1.cos_coeff = {0.2};
  TrigPoly f2;
  f2.sin_coeff = {0.0, 0.12};
  Conjugator q;
  q.add_factor(f1, AlgebraElement{0.0, 1.0, 0.0});
  q.add_factor(f2, AlgebraElement{0.6, 0.0, 0.8});
  TrigPoly phase;
  phase.sin_coeff = {0.3};
  return Cocycle::conjugated(Cocycle::diagonal(winding, phase), q,
                             RotationNumber::golden());
}

CorrelationSequence synthetic_sequence(const std::vector<long long>& ns,
                                       const std::vector<double>& norms) {
  CorrelationSequence seq;
  seq.k = 1;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    CorrelationSequence::Term term;
    term.n = ns[i];
    term.norm = norms[i];
    term.matrix = Eigen::MatrixXcd::Zero(1, 1);
    seq.terms.push_back(term);
  }
  return seq;
}

}  // namespace

TEST_CASE("diagonal cocycle correlations vanish away from n = 0") {
  const Cocycle phi = Cocycle::diagonal(1);
  const std::vector<long long> schedule{0, 1, 2, 3, 5, 8, 13, 21, 100, 1000};
  const CorrelationSequence seq =
      representation_correlation(phi, RotationNumber::golden(), 1, schedule, 4096);

  REQUIRE(seq.terms.size() == schedule.size());
  CHECK(seq.k == 1);
  // n = 0 is the empty product, so its quadrature is exactly the identity.
  CHECK((seq.terms[0].matrix - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
  CHECK(seq.terms[0].norm == doctest::Approx(1.0).epsilon(1e-15));
  // Every later term averages pure harmonics e^{2 pi i n x} over a grid that
  // does not divide n, which cancels to rounding noise.
  for (std::size_t s = 1; s < seq.terms.size(); ++s) {
    CHECK(seq.terms[s].norm < 1e-12);
  }
}

TEST_CASE("diagonal cocycle correlations stay diagonal and keep the trivial weight") {
  const std::vector<long long> schedule{1, 2, 4, 8, 16, 32};
  const CorrelationSequence seq = representation_correlation(
      Cocycle::diagonal(2), RotationNumber::golden(), 2, schedule, 1024);
  for (const auto& term : seq.terms) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (r != c) CHECK(std::abs(term.matrix(r, c)) < 1e-12);
      }
    }
    // The middle weight of the k = 2 representation is invariant under the
    // diagonal torus, so its correlation never decays.
    CHECK(std::abs(term.matrix(1, 1) - Cplx(1.0, 0.0)) < 1e-12);
  }
  CHECK_FALSE(mixing_diagnostic(seq).decays);
}

TEST_CASE("constant cocycle correlations are the representation powers") {
  const GroupElement c = exponential(AlgebraElement{0.21, 0.35, -0.4});
  const Cocycle phi = Cocycle::constant(c);
  const std::vector<long long> schedule{0, 1, 2, 3, 4, 6, 9, 14};
  const CorrelationSequence seq =
      representation_correlation(phi, RotationNumber::golden(), 1, schedule, 64);

  GroupElement power;
  long long reached = 0;
  for (const auto& term : seq.terms) {
    for (; reached < term.n; ++reached) power = power * c;
    CHECK((term.matrix - pi_k(1, power).entries).norm() < 1e-13);
    // Pi_1 of a group element is unitary, so the scaled Frobenius norm is 1.
    CHECK(term.norm == doctest::Approx(1.0).epsilon(1e-13));
  }
  const MixingReport mix = mixing_diagnostic(seq);
  CHECK_FALSE(mix.decays);
  CHECK(std::abs(mix.fitted_rate) < 1e-10);
}

TEST_CASE("analytic degree-carrying cocycle mixes and keeps n*norm bounded") {
  const Cocycle phi = test_conjugated();
  const std::vector<long long> schedule{16, 32, 64, 128, 256, 512, 1024};
  const CorrelationSequence seq =
      representation_correlation(phi, RotationNumber::golden(), 1, schedule, 4096);

  const MixingReport mix = mixing_diagnostic(seq);
  CHECK(mix.decays);
  CHECK(mix.fitted_rate < -0.6);

  // Analytic data decays faster than any power, so the 1/n envelope holds
  // with a tiny constant; the trend verdict is left to the sharply C2
  // example below, where the sequence stays above rounding noise.
  const LebesgueBoundReport bound = lebesgue_bound_check(seq);
  CHECK(bound.c_estimate > 0.0);
  CHECK(bound.c_estimate < 1e-6);
}

TEST_CASE("sharply C2 cocycle shows the 1/n envelope with a falling trend") {
  // Bernoulli phase term: exactly C2, third derivative jumping at the seam,
  // so the correlation tail follows the finite-smoothness power law instead
  // of collapsing below rounding noise.
  TrigPoly phase;
  phase.sin_coeff = {0.3};
  phase.bernoulli4_coeff = {40.0};
  TrigPoly f1;
  f1.cos_coeff = {0.2};
  TrigPoly f2;
  f2.sin_coeff = {0.0, 0.12};
  Conjugator q;
  q.add_factor(f1, AlgebraElement{0.0, 1.0, 0.0});
  q.add_factor(f2, AlgebraElement{0.6, 0.0, 0.8});
  const Cocycle phi =
      Cocycle::conjugated(Cocycle::diagonal(1, phase), q, RotationNumber::golden());

  const std::vector<long long> schedule{16, 32, 64, 128, 256, 512};
  const CorrelationSequence seq =
      representation_correlation(phi, RotationNumber::golden(), 1, schedule, 4096);

  const MixingReport mix = mixing_diagnostic(seq);
  CHECK(mix.decays);
  CHECK(mix.fitted_rate < -1.0);

  const LebesgueBoundReport bound = lebesgue_bound_check(seq);
  CHECK(bound.holds_uniformly);
  CHECK(bound.spearman < -0.9);
  CHECK(bound.c_estimate > 0.0);
  CHECK(bound.c_estimate < 1.0);
}

TEST_CASE("mixing diagnostic on synthetic sequences") {
  const std::vector<long long> ns{1, 2, 4, 8, 16, 32, 64, 128};

  SUBCASE("1/n decay is detected with the right rate") {
    std::vector<double> norms;
    for (long long n : ns) norms.push_back(1.0 / static_cast<double>(n));
    const MixingReport mix = mixing_diagnostic(synthetic_sequence(ns, norms));
    CHECK(mix.decays);
    CHECK(mix.fitted_rate == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("flat sequences do not decay") {
    const MixingReport mix = mixing_diagnostic(
        synthetic_sequence(ns, std::vector<double>(ns.size(), 0.8)));
    CHECK_FALSE(mix.decays);
    CHECK(mix.fitted_rate == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("identically zero sequences decay with a sentinel rate") {
    const MixingReport mix = mixing_diagnostic(
        synthetic_sequence(ns, std::vector<double>(ns.size(), 0.0)));
    CHECK(mix.decays);
    CHECK(mix.fitted_rate == -std::numeric_limits<double>::infinity());
  }
  SUBCASE("too few terms throw") {
    CHECK_THROWS_AS(mixing_diagnostic(synthetic_sequence({1, 2, 4}, {1.0, 1.0, 1.0})),
                    InsufficientDataError);
  }
}

TEST_CASE("Lebesgue bound check on synthetic sequences") {
  const std::vector<long long> ns{16, 32, 64, 128, 256, 512, 1024, 2048};

  SUBCASE("an exact 3/n sequence gives the constant and holds") {
    std::vector<double> norms;
    for (long long n : ns) norms.push_back(3.0 / static_cast<double>(n));
    const LebesgueBoundReport bound = lebesgue_bound_check(synthetic_sequence(ns, norms));
    CHECK(bound.c_estimate == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(bound.spearman == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bound.holds_uniformly);
  }
  SUBCASE("a 1/sqrt(n) sequence fails uniformity") {
    std::vector<double> norms;
    for (long long n : ns) norms.push_back(1.0 / std::sqrt(static_cast<double>(n)));
    const LebesgueBoundReport bound = lebesgue_bound_check(synthetic_sequence(ns, norms));
    CHECK(bound.spearman == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(bound.holds_uniformly);
  }
  SUBCASE("terms below n = 16 are ignored and may starve the check") {
    CHECK_THROWS_AS(
        lebesgue_bound_check(synthetic_sequence({1, 2, 4, 8, 16, 32}, {1, 1, 1, 1, 1, 1})),
        InsufficientDataError);
  }
}

TEST_CASE("spectral coefficients of the pure rotation harmonic") {
  const RotationNumber alpha = RotationNumber::golden();
  const auto one = [](CirclePoint) { return Cplx(1.0, 0.0); };
  const auto harmonic = [](CirclePoint x) {
    return std::polar(1.0, kTwoPi * x.x);
  };
  const SpectralCoefficients sc =
      spectral_coefficients(one, alpha, 0, harmonic, 8, 64, "e(x)");

  CHECK(sc.f_label == "e(x)");
  REQUIRE(sc.coefficients.size() == 17);
  for (const auto& [n, value] : sc.coefficients) {
    // (U^n f, f) for the plain Koopman operator and f = e^{2 pi i x} is the
    // rotation character e^{2 pi i n alpha}.
    const Cplx expected = std::polar(1.0, kTwoPi * frac_mul(n, alpha.alpha));
    CHECK(std::abs(value - expected) < 1e-12);
  }
}

TEST_CASE("degree-one weight flattens the spectral measure") {
  const RotationNumber alpha = RotationNumber::golden();
  const auto gamma = [](CirclePoint x) { return std::polar(1.0, kTwoPi * x.x); };
  const auto one = [](CirclePoint) { return Cplx(1.0, 0.0); };
  const SpectralCoefficients sc = spectral_coefficients(gamma, alpha, 1, one, 8, 64);

  for (const auto& [n, value] : sc.coefficients) {
    if (n == 0) {
      CHECK(std::abs(value - Cplx(1.0, 0.0)) < 1e-12);
    } else {
      // gamma^(n)(x) = e^{2 pi i (n x + const)} averages to zero on any grid
      // finer than n points, so the coefficients are a discrete delta.
      CHECK(std::abs(value) < 1e-10);
    }
  }
}

TEST_CASE("spectral coefficients are hermitian and normalized") {
  const RotationNumber alpha = RotationNumber::golden();
  const auto gamma = [](CirclePoint x) {
    return std::polar(1.0, kTwoPi * (x.x + 0.3 * std::sin(kTwoPi * x.x)));
  };
  const auto f = [](CirclePoint x) {
    return std::polar(1.0, kTwoPi * x.x) + 0.5 * std::polar(1.0, -2.0 * kTwoPi * x.x) +
           Cplx(0.2, 0.0);
  };
  const int grid = 512;
  const long long n_max = 8;
  const SpectralCoefficients sc = spectral_coefficients(gamma, alpha, 2, f, n_max, grid);

  const auto at = [&](long long n) {
    return sc.coefficients[static_cast<std::size_t>(n + n_max)].second;
  };
  for (long long n = 1; n <= n_max; ++n) {
    CHECK(std::abs(at(-n) - std::conj(at(n))) < 1e-12);
  }

  // sigma_hat(0) is the squared quadrature norm of f.
  double mass = 0.0;
  for (int i = 0; i < grid; ++i) {
    mass += std::norm(f(CirclePoint{static_cast<double>(i) / grid}));
  }
  mass /= grid;
  CHECK(std::abs(at(0) - Cplx(mass, 0.0)) < 1e-12);
  CHECK(at(0).imag() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("non-unimodular weights are rejected") {
  const auto shrunk = [](CirclePoint) { return Cplx(0.9, 0.0); };
  const auto one = [](CirclePoint) { return Cplx(1.0, 0.0); };
  CHECK_THROWS_AS(
      spectral_coefficients(shrunk, RotationNumber::golden(), 1, one, 4, 32),
      NotUnimodularError);
}

TEST_CASE("coboundary obstruction of the trivial cocycle stays at one") {
  const auto one = [](TorusPoint) { return Cplx(1.0, 0.0); };
  const std::vector<long long> schedule{0, 1, 2, 4, 8, 16, 32, 64};
  const CoboundaryReport report = coboundary_obstruction(
      one, 0.6180339887498949, 0.41421356237309503, schedule, 64, 64);

  REQUIRE(report.integrals.size() == schedule.size());
  for (const auto& [n, value] : report.integrals) {
    CHECK(value == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_FALSE(report.tends_to_zero);
}

TEST_CASE("a first-coordinate winding kills the obstruction integrals exactly") {
  const auto phi = [](TorusPoint p) { return std::polar(1.0, kTwoPi * p.x1); };
  const std::vector<long long> schedule{0, 1, 2, 3, 4, 8, 16, 32};
  const CoboundaryReport report = coboundary_obstruction(
      phi, 0.6180339887498949, 0.41421356237309503, schedule, 64, 64);

  CHECK(report.integrals[0].second == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t s = 1; s < report.integrals.size(); ++s) {
    // phi^(n) carries x1-winding n < 64, which the uniform x1 grid cancels.
    CHECK(report.integrals[s].second < 1e-12);
  }
  CHECK(report.tends_to_zero);
}

TEST_CASE("two-branch cocycle obstruction decays with cut-aligned quadrature") {
  // Identity on x2 in [0, 1-beta), a first-coordinate character on the
  // return window [1-beta, 1).  Once the x2 orbit must visit the window,
  // every point picks up winding and the torus average collapses.
  const double omega = 0.6180339887498949;
  const double beta = 1.0 - omega;
  const auto phi = [&](TorusPoint p) {
    if (p.x2 < 1.0 - beta) return Cplx(1.0, 0.0);
    return std::polar(1.0, kTwoPi * (p.x1 - p.x2 * omega));
  };
  const std::vector<long long> schedule{1, 2, 3, 4, 6, 8, 12, 16};
  const CoboundaryReport report = coboundary_obstruction(
      phi, omega, beta, schedule, 64, 89, {0.0, 1.0 - beta});

  // With cells aligned to the cut, I_1 is the measure of the identity branch
  // to rounding accuracy; a uniform grid would misallocate half a cell.
  CHECK(report.integrals[0].second == doctest::Approx(1.0 - beta).epsilon(1e-12));
  // After three steps every x2 orbit has visited the window at least once,
  // so the x1 average vanishes on the whole torus.
  for (std::size_t s = 3; s < report.integrals.size(); ++s) {
    CHECK(report.integrals[s].second < 1e-10);
  }
  CHECK(report.tends_to_zero);

  const CoboundaryReport blurred =
      coboundary_obstruction(phi, omega, beta, schedule, 64, 89);
  CHECK(std::abs(blurred.integrals[0].second - (1.0 - beta)) >
        100.0 * std::abs(report.integrals[0].second - (1.0 - beta)));
}

TEST_CASE("schedule and grid validation") {
  const Cocycle phi = Cocycle::diagonal(1);
  const RotationNumber alpha = RotationNumber::golden();
  CHECK_THROWS_AS(representation_correlation(phi, alpha, 1, {}, 32),
                  std::invalid_argument);
  CHECK_THROWS_AS(representation_correlation(phi, alpha, 1, {4, 4}, 32),
                  std::invalid_argument);
  CHECK_THROWS_AS(representation_correlation(phi, alpha, 1, {-1, 4}, 32),
                  std::invalid_argument);
  CHECK_THROWS_AS(representation_correlation(phi, alpha, -1, {1, 2}, 32),
                  std::invalid_argument);
  CHECK_THROWS_AS(representation_correlation(phi, alpha, 1, {1, 2}, 0),
                  std::invalid_argument);
  const auto one = [](TorusPoint) { return Cplx(1.0, 0.0); };
  CHECK_THROWS_AS(coboundary_obstruction(one, 0.5, 0.5, {1, 2}, 0, 4),
                  std::invalid_argument);
}

#include <cmath>
#include <complex>

#include "doctest.h"
#include "helpers.hpp"
#include "su2dyn/cocycle.hpp"
#include "su2dyn/irreps.hpp"

using namespace su2dyn;
using testhelp::Cplx;

namespace {

double binom(int n, int r) {
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out *= static_cast<double>(n - r + i) / i;
  return out;
}

// Scaled Frobenius distance between two representation matrices.
double rep_distance(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return representation_norm(Eigen::MatrixXcd(x - y));
}

}  // namespace

TEST_CASE("pi_k closed forms: weight zero, defining, diagonal") {
  const GroupElement g = exponential(AlgebraElement{0.4, 0.7, -0.3});
  const IrrepMatrix scalar = pi_k(0, g);
  CHECK(scalar.entries.rows() == 1);
  CHECK(std::abs(scalar.entries(0, 0) - Cplx(1.0, 0.0)) < 1e-15);

  // Pi_1 is the defining representation on the monomial basis.
  CHECK(rep_distance(pi_k(1, g).entries, testhelp::to_matrix(g)) < 1e-15);

  // Diagonal group elements act diagonally with winding k-2j.
  const double theta = 0.83;
  const GroupElement d(std::polar(1.0, theta), Cplx(0.0, 0.0));
  for (int k : {1, 2, 5}) {
    const IrrepMatrix m = pi_k(k, d);
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j <= k; ++j) {
        const Cplx want =
            i == j ? std::polar(1.0, theta * (k - 2 * j)) : Cplx(0.0, 0.0);
        CHECK(std::abs(m.entries(i, j) - want) < 1e-14);
      }
    }
  }

  CHECK(rep_distance(pi_k(4, GroupElement()).entries, Eigen::MatrixXcd::Identity(5, 5)) ==
        0.0);
}

TEST_CASE("pi_k is a homomorphism, unitary for the weighted inner product") {
  const su2dyn::CounterRng rng(811);
  for (int k = 1; k <= 7; ++k) {
    Eigen::MatrixXcd weights = Eigen::MatrixXcd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) weights(j, j) = 1.0 / binom(k, j);
    for (int trial = 0; trial < 150; ++trial) {
      const std::uint64_t base = 1000 * static_cast<std::uint64_t>(k) + 2 * trial;
      const GroupElement g = testhelp::random_group(rng, base);
      const GroupElement h = testhelp::random_group(rng, base + 1);
      const Eigen::MatrixXcd mg = pi_k(k, g).entries;
      CHECK(rep_distance(pi_k(k, g * h).entries, mg * pi_k(k, h).entries) < 1e-10);
      // Unitarity with respect to the monomial weights 1/C(k,j):
      // M^dagger W M = W.
      CHECK(rep_distance(mg.adjoint() * weights * mg, weights) < 1e-10);
    }
  }
}

TEST_CASE("pi_k_star tabulated actions and tracelessness") {
  // Weight one is the defining representation in coordinates.
  const AlgebraElement a{0.3, -0.9, 0.5};
  CHECK(rep_distance(pi_k_star(1, a).entries, testhelp::to_matrix(a)) < 1e-15);

  // Diagonal elements map to the weight ladder.
  const double d = 0.77;
  const Eigen::MatrixXcd ladder = pi_k_star(3, AlgebraElement{d, 0.0, 0.0}).entries;
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= 3; ++j) {
      const Cplx want = i == j ? Cplx(0.0, d * (3 - 2 * i)) : Cplx(0.0, 0.0);
      CHECK(std::abs(ladder(i, j) - want) < 1e-15);
    }
  }

  const su2dyn::CounterRng rng(812);
  for (int k = 1; k <= 9; ++k) {
    const AlgebraElement v = testhelp::random_algebra(rng, k, 1e-2, 1e2);
    CHECK(std::abs(pi_k_star(k, v).entries.trace()) < 1e-12);
  }
}

TEST_CASE("basis bridge carries the tabulated matrix to the monomial derivative") {
  // In the monomial basis the algebra action is the t-derivative of
  // Pi_k(exp(tA)) at t = 0; check by finite differences.
  const su2dyn::CounterRng rng(813);
  const double h = 1e-6;
  for (int k = 1; k <= 5; ++k) {
    const AlgebraElement v = testhelp::random_direction(rng, k);
    const Eigen::MatrixXcd plus = pi_k(k, exponential(v * h)).entries;
    const Eigen::MatrixXcd minus = pi_k(k, exponential(v * -h)).entries;
    const Eigen::MatrixXcd fd = (plus - minus) / (2.0 * h);
    CHECK(rep_distance(fd, pi_k_star_monomial(k, v).entries) < 1e-9);
  }
}

TEST_CASE("intertwining of group and algebra representations") {
  const su2dyn::CounterRng rng(814);
  for (int k = 1; k <= 5; ++k) {
    for (int trial = 0; trial < 40; ++trial) {
      const AlgebraElement v =
          testhelp::random_algebra(rng, 100 * k + trial, 1e-2, 3.0);
      const Eigen::MatrixXcd lhs = pi_k(k, exponential(v)).entries;
      const Eigen::MatrixXcd rhs =
          testhelp::exp_oracle(Eigen::MatrixXcd(pi_k_star_monomial(k, v).entries));
      CHECK(rep_distance(lhs, rhs) < 1e-8);
    }
  }
}

TEST_CASE("equivariance under the adjoint action") {
  const su2dyn::CounterRng rng(815);
  for (int k = 1; k <= 7; ++k) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::uint64_t base = 100 * static_cast<std::uint64_t>(k) + 2 * trial;
      const GroupElement g = testhelp::random_group(rng, base);
      const AlgebraElement v = testhelp::random_algebra(rng, base + 1, 1e-1, 10.0);
      const Eigen::MatrixXcd lhs = pi_k_star_monomial(k, adjoint(g, v)).entries;
      const Eigen::MatrixXcd mg = pi_k(k, g).entries;
      const Eigen::MatrixXcd rhs =
          mg * pi_k_star_monomial(k, v).entries * mg.inverse();
      CHECK(rep_distance(lhs, rhs) < 1e-9);
    }
  }
}

TEST_CASE("differentiation along a path intertwines with the algebra action") {
  // xi(x) built from the conjugator machinery so its logarithmic derivative
  // is available in closed form.
  TrigPoly f1;
  f1.cos_coeff = {0.6};
  TrigPoly f2;
  f2.sin_coeff = {0.45};
  Conjugator xi;
  xi.add_factor(f1, AlgebraElement{0.2, 0.9, 0.0});
  xi.add_factor(f2, AlgebraElement{0.0, -0.3, 1.0});
  const double h = 1e-6;
  for (int k : {1, 2, 3, 5}) {
    for (double x : {0.12, 0.47, 0.85}) {
      const Eigen::MatrixXcd plus = pi_k(k, xi.value(x + h)).entries;
      const Eigen::MatrixXcd minus = pi_k(k, xi.value(x - h)).entries;
      const Eigen::MatrixXcd mid = pi_k(k, xi.value(x)).entries;
      const Eigen::MatrixXcd fd = ((plus - minus) / (2.0 * h)) * mid.inverse();
      const Eigen::MatrixXcd want =
          pi_k_star_monomial(k, xi.value_and_logs(x).dq).entries;
      CHECK(rep_distance(fd, want) / representation_norm(want) < 1e-4);
    }
  }
}

TEST_CASE("determinant identity for the odd representations") {
  const su2dyn::CounterRng rng(816);

  // Weight one: det Pi_1*(A) = det A.
  for (int trial = 0; trial < 50; ++trial) {
    const AlgebraElement v = testhelp::random_algebra(rng, trial, 1e-3, 1e3);
    const DeterminantIdentityReport r = verify_determinant_identity(1, v);
    CHECK(r.rel_error < 1e-12);
    CHECK(std::abs(r.rhs - Cplx(v.norm_sq(), 0.0)) < 1e-9 * std::abs(r.rhs));
  }

  // k = 2 on a diagonal element: det diag(3id, id, -id, -3id) = 9 d^4.
  const double d = 1.3;
  const DeterminantIdentityReport diag = verify_determinant_identity(2, {d, 0.0, 0.0});
  CHECK(std::abs(diag.lhs - Cplx(9.0 * std::pow(d, 4), 0.0)) < 1e-10);
  CHECK(diag.rel_error < 1e-12);

  for (int k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 50; ++trial) {
      const AlgebraElement v =
          testhelp::random_algebra(rng, 1000 * k + trial, 1e-3, 1e3);
      CHECK(verify_determinant_identity(k, v).rel_error < 1e-9);
    }
  }

  const DeterminantIdentityReport zero = verify_determinant_identity(2, {0.0, 0.0, 0.0});
  CHECK(std::abs(zero.lhs) == 0.0);
  CHECK(std::abs(zero.rhs) == 0.0);
  CHECK(zero.rel_error == 0.0);
}

TEST_CASE("norm sandwich for the algebra representations") {
  const su2dyn::CounterRng rng(817);

  // Weight one is an isometry in the scaled norm.
  for (int trial = 0; trial < 30; ++trial) {
    const AlgebraElement v = testhelp::random_algebra(rng, trial, 1e-3, 1e3);
    const NormSandwichReport r = verify_norm_sandwich(1, v);
    CHECK(r.lower_ok);
    CHECK(r.upper_ok);
    CHECK(std::abs(r.middle - r.lower) < 1e-12 * r.lower);
  }

  for (int k = 1; k <= 9; ++k) {
    for (int trial = 0; trial < 60; ++trial) {
      const AlgebraElement v =
          testhelp::random_algebra(rng, 1000 * k + trial, 1e-3, 1e3);
      const NormSandwichReport r = verify_norm_sandwich(k, v);
      CHECK(r.lower_ok);
      CHECK(r.upper_ok);
    }
  }

  const NormSandwichReport zero = verify_norm_sandwich(3, {0.0, 0.0, 0.0});
  CHECK(zero.lower_ok);
  CHECK(zero.upper_ok);
}

TEST_CASE("inverse bound with the explicit constant") {
  CHECK(inverse_bound_constant(1) == 32.0);

  const InverseBoundReport unit = inverse_bound_check(1, {1.0, 0.0, 0.0});
  CHECK(std::abs(unit.norm_inverse - 1.0) < 1e-14);
  CHECK(unit.bound == 32.0);
  CHECK(unit.ok);

  const su2dyn::CounterRng rng(818);
  for (int k = 1; k <= 4; ++k) {
    for (double scale : {1e-3, 1.0, 1e3}) {
      for (int trial = 0; trial < 25; ++trial) {
        const AlgebraElement v =
            testhelp::random_direction(rng, 1000 * k + trial) * scale;
        CHECK(inverse_bound_check(k, v).ok);
      }
    }
  }

  // Homogeneity: near-zero elements blow up exactly like 1/norm.
  const InverseBoundReport tiny = inverse_bound_check(2, {0.0, 1e-9, 0.0});
  CHECK(tiny.norm_inverse > 1e8);
  CHECK(tiny.ok);

  CHECK_THROWS_AS(inverse_bound_check(2, {0.0, 0.0, 0.0}), ZeroElementError);
}

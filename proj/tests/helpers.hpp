#pragma once

// Shared oracles for the unit tests.  Everything here goes through plain
// dense complex matrices so that library results are checked against an
// independent route.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "su2dyn/rng.hpp"
#include "su2dyn/su2.hpp"

namespace testhelp {

using Mat2 = Eigen::Matrix2cd;
using Cplx = std::complex<double>;

inline Mat2 to_matrix(const su2dyn::GroupElement& g) {
  Mat2 m;
  m << g.z1(), g.z2(), -std::conj(g.z2()), std::conj(g.z1());
  return m;
}

inline Mat2 to_matrix(const su2dyn::AlgebraElement& v) {
  Mat2 m;
  m << Cplx(0.0, v.a), Cplx(v.b, v.c), Cplx(-v.b, v.c), Cplx(0.0, -v.a);
  return m;
}

// Dimension-scaled Frobenius norm sqrt((1/d) sum |m_ij|^2).
template <class M>
double scaled_frobenius(const M& m) {
  return std::sqrt(m.squaredNorm() / static_cast<double>(m.rows()));
}

// Matrix exponential by scaling and squaring with a long Taylor tail;
// independent of the closed-form group exponential.
template <class M>
M exp_oracle(M a) {
  int s = 0;
  while (a.norm() > 0.25) {
    a *= 0.5;
    ++s;
  }
  M sum = M::Identity(a.rows(), a.cols());
  M term = M::Identity(a.rows(), a.cols());
  for (int k = 1; k <= 24; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

// Direction uniform-ish on the sphere (deterministic), magnitude from the
// caller.  Counters are consumed in blocks of four per element.
inline su2dyn::AlgebraElement random_direction(const su2dyn::CounterRng& rng, std::uint64_t i) {
  const double u = rng.uniform(4 * i, -1.0, 1.0);
  const double phi = rng.uniform(4 * i + 1, 0.0, 2.0 * 3.14159265358979323846);
  const double r = std::sqrt(std::max(0.0, 1.0 - u * u));
  return {u, r * std::cos(phi), r * std::sin(phi)};
}

inline su2dyn::AlgebraElement random_algebra(const su2dyn::CounterRng& rng, std::uint64_t i,
                                             double lo, double hi) {
  return random_direction(rng, i) * rng.log_uniform(4 * i + 2, lo, hi);
}

inline su2dyn::GroupElement random_group(const su2dyn::CounterRng& rng, std::uint64_t i) {
  return su2dyn::exponential(random_direction(rng, i) * rng.uniform(4 * i + 3, 0.0, 3.2));
}

}  // namespace testhelp

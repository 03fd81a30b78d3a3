#include "su2dyn/irreps.hpp"

#include <cmath>
#include <stdexcept>

namespace su2dyn {

namespace {

double binomial(int n, int r) {
  double out = 1.0;
  for (int i = 1; i <= r; ++i) {
    out *= static_cast<double>(n - r + i) / static_cast<double>(i);
  }
  return out;
}

void require_weight(int k, int minimum) {
  if (k < minimum) throw std::invalid_argument("representation index too small");
}

}  // namespace

double representation_norm(const Eigen::MatrixXcd& m) {
  return std::sqrt(m.squaredNorm() / static_cast<double>(m.rows()));
}

IrrepMatrix pi_k(int k, const GroupElement& g) {
  require_weight(k, 0);
  const std::complex<double> z1 = g.z1(), z2 = g.z2();
  IrrepMatrix out{k, Eigen::MatrixXcd::Zero(k + 1, k + 1)};
  // Column j is the expansion of (z1 u - conj(z2) v)^{k-j} (z2 u + conj(z1) v)^j
  // on the monomials u^{k-m} v^m.
  for (int j = 0; j <= k; ++j) {
    for (int r = 0; r <= k - j; ++r) {
      const std::complex<double> left =
          binomial(k - j, r) * std::pow(z1, r) * std::pow(-std::conj(z2), k - j - r);
      for (int s = 0; s <= j; ++s) {
        const std::complex<double> right =
            binomial(j, s) * std::pow(z2, s) * std::pow(std::conj(z1), j - s);
        const int m = k - (r + s);
        out.entries(m, j) += left * right;
      }
    }
  }
  return out;
}

AlgebraIrrepMatrix pi_k_star(int k, const AlgebraElement& v) {
  require_weight(k, 1);
  AlgebraIrrepMatrix out{k, Eigen::MatrixXcd::Zero(k + 1, k + 1)};
  const std::complex<double> ia(0.0, v.a);
  const std::complex<double> e_coeff(v.b, v.c);
  const std::complex<double> f_coeff(-v.b, v.c);
  for (int i = 0; i <= k; ++i) {
    out.entries(i, i) = ia * static_cast<double>(k - 2 * i);
    if (i >= 1) out.entries(i - 1, i) = e_coeff * static_cast<double>(i * (k - i + 1));
    if (i < k) out.entries(i + 1, i) = f_coeff;
  }
  return out;
}

Eigen::VectorXd v_basis_scaling(int k) {
  require_weight(k, 0);
  Eigen::VectorXd d(k + 1);
  double c = 1.0;
  d(0) = c;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(k - i + 1);
    d(i) = c;
  }
  return d;
}

AlgebraIrrepMatrix pi_k_star_monomial(int k, const AlgebraElement& v) {
  AlgebraIrrepMatrix out = pi_k_star(k, v);
  const Eigen::VectorXd d = v_basis_scaling(k);
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; j <= k; ++j) {
      out.entries(i, j) *= d(i) / d(j);
    }
  }
  return out;
}

DeterminantIdentityReport verify_determinant_identity(int k, const AlgebraElement& v) {
  require_weight(k, 1);
  DeterminantIdentityReport report;
  report.lhs = pi_k_star(2 * k - 1, v).entries.determinant();
  double odd_factorial = 1.0;  // (2k-1)!!
  for (int m = 1; m <= 2 * k - 1; m += 2) odd_factorial *= static_cast<double>(m);
  const double det_a = v.norm_sq();
  report.rhs = odd_factorial * odd_factorial * std::pow(det_a, k);
  const double scale = std::max(std::abs(report.lhs), std::abs(report.rhs));
  report.rel_error = scale > 0.0 ? std::abs(report.lhs - report.rhs) / scale : 0.0;
  return report;
}

NormSandwichReport verify_norm_sandwich(int k, const AlgebraElement& v) {
  require_weight(k, 1);
  NormSandwichReport report;
  report.lower = v.norm();
  report.middle = representation_norm(pi_k_star(k, v).entries);
  report.upper = static_cast<double>(k) * static_cast<double>(k) * report.lower;
  // One scaled ulp of slack keeps exact equality cases (k = 1) honest.
  const double slack = 1e-12 * (1.0 + report.upper);
  report.lower_ok = report.lower <= report.middle + slack;
  report.upper_ok = report.middle <= report.upper + slack;
  return report;
}

double inverse_bound_constant(int k) {
  require_weight(k, 1);
  double odd_factorial = 1.0, factorial = 1.0;
  for (int m = 1; m <= 2 * k - 1; ++m) {
    factorial *= static_cast<double>(m);
    if (m % 2 == 1) odd_factorial *= static_cast<double>(m);
  }
  return std::pow(2.0 * k, 4 * k + 1) * factorial / (odd_factorial * odd_factorial);
}

InverseBoundReport inverse_bound_check(int k, const AlgebraElement& v) {
  require_weight(k, 1);
  const double nrm = v.norm();
  if (nrm == 0.0) {
    throw ZeroElementError("inverse bound of a singular representation matrix");
  }
  const Eigen::MatrixXcd m = pi_k_star(2 * k - 1, v).entries;
  InverseBoundReport report;
  report.norm_inverse = representation_norm(m.partialPivLu().inverse());
  report.bound = inverse_bound_constant(k) / nrm;
  report.ok = report.norm_inverse <= report.bound;
  return report;
}

}  // namespace su2dyn

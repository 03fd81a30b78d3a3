#ifndef SU2DYN_SPECTRAL_HPP
#define SU2DYN_SPECTRAL_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "su2dyn/cocycle.hpp"
#include "su2dyn/irreps.hpp"
#include "su2dyn/rotations.hpp"

// Correlation-based spectral diagnostics.  The central objects are the
// matrix correlations int_T Pi_k(phi^(n)(x)) dx along a schedule of n; their
// decay witnesses mixing, and boundedness of n * norm witnesses the
// Lebesgue-type 1/n rate.  Scalar spectral coefficients (U^n f, f) and the
// 2-torus coboundary obstruction integrals round out the toolbox.

namespace su2dyn {

class InsufficientDataError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotUnimodularError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct CorrelationSequence {
  struct Term {
    long long n = 0;
    Eigen::MatrixXcd matrix;
    double norm = 0.0;
  };
  int k = 0;
  std::vector<Term> terms;
};

struct MixingReport {
  bool decays = false;
  // Least-squares slope of log norm against log n, skipping exact zeros;
  // -infinity when every term is zero.
  double fitted_rate = 0.0;
};

struct LebesgueBoundReport {
  double c_estimate = 0.0;  // max over the tail of n * norm
  double spearman = 0.0;    // rank correlation of n versus n * norm
  bool holds_uniformly = false;
};

struct SpectralCoefficients {
  std::string f_label;
  std::vector<std::pair<long long, std::complex<double>>> coefficients;
};

struct CoboundaryReport {
  std::vector<std::pair<long long, double>> integrals;
  bool tends_to_zero = false;
};

// Grid quadrature of Pi_k(phi^(n)(x)) for each scheduled n (nonnegative,
// increasing; n = 0 gives the identity).  Running products are extended
// incrementally, so the whole schedule costs O(n_max * grid).
CorrelationSequence representation_correlation(const Cocycle& phi,
                                               const RotationNumber& alpha, int k,
                                               const std::vector<long long>& n_schedule,
                                               int grid_size);

// Quartile decay test plus a log-log rate fit.  Needs at least four terms.
MixingReport mixing_diagnostic(const CorrelationSequence& seq);

// Checks the 1/n envelope on the tail n >= 16: the largest n * norm is the
// constant estimate, and the absence of an upward trend (Spearman <= 0.2)
// makes the bound uniform.  Needs at least three tail terms.
LebesgueBoundReport lebesgue_bound_check(const CorrelationSequence& seq);

// sigma_hat(n) = grid mean of gamma^(n)(x)^m f(T^n x) conj(f(x)) for
// |n| <= n_max, the Fourier coefficients of the spectral measure attached to
// the weighted shift built from the unimodular gamma.  Throws
// NotUnimodularError unless |gamma| = 1 on the grid within 1e-6.
SpectralCoefficients spectral_coefficients(
    const std::function<std::complex<double>(CirclePoint)>& gamma,
    const RotationNumber& alpha, int m,
    const std::function<std::complex<double>(CirclePoint)>& f, long long n_max,
    int grid_size, std::string f_label = "f");

// I_n = |2-torus quadrature of phi^(n)| for a circle-valued cocycle over the
// rotation by (alpha, beta), with the quartile decay verdict.  When
// x2_breakpoints is nonempty the x2 quadrature cells are aligned to those
// cuts (midpoint rule inside each piece), so discontinuous two-branch
// cocycles are integrated without straddling a jump.
CoboundaryReport coboundary_obstruction(
    const std::function<std::complex<double>(TorusPoint)>& phi, double alpha,
    double beta, const std::vector<long long>& n_schedule, int grid1, int grid2,
    const std::vector<double>& x2_breakpoints = {});

}  // namespace su2dyn

#endif  // SU2DYN_SPECTRAL_HPP

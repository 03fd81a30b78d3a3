#include "su2dyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "su2dyn/parallel.hpp"

namespace su2dyn {

namespace {

using Cplx = std::complex<double>;

// Pairwise reduction over per-grid-point values, mirroring
// parallel::pairwise_sum so results do not depend on the thread count.
template <class T>
T pairwise(const std::vector<T>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 16) {
    T acc = xs[lo];
    for (std::size_t i = lo + 1; i < hi; ++i) acc += xs[i];
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise(xs, lo, mid) + pairwise(xs, mid, hi);
}

void require_schedule(const std::vector<long long>& n_schedule) {
  if (n_schedule.empty()) throw std::invalid_argument("empty n schedule");
  long long prev = -1;
  for (long long n : n_schedule) {
    if (n < 0) throw std::invalid_argument("n schedule entries must be nonnegative");
    if (n <= prev) throw std::invalid_argument("n schedule must be strictly increasing");
    prev = n;
  }
}

double quartile_mean(const std::vector<double>& xs, bool last) {
  const std::size_t q = (xs.size() + 3) / 4;
  const std::size_t lo = last ? xs.size() - q : 0;
  double sum = 0.0;
  for (std::size_t i = lo; i < lo + q; ++i) sum += xs[i];
  return sum / static_cast<double>(q);
}

// Decay verdict shared by the correlation and coboundary diagnostics: the
// mean over the last quartile of the schedule must drop below a tenth of the
// mean over the first.  An identically zero tail passes outright.
bool quartile_decay(const std::vector<double>& norms) {
  const double head = quartile_mean(norms, false);
  const double tail = quartile_mean(norms, true);
  return tail == 0.0 || tail < 0.1 * head;
}

// Integer power of a unimodular complex number.  Negative exponents use the
// conjugate, which is the inverse on the unit circle.
Cplx unit_ipow(Cplx z, long long m) {
  if (m < 0) {
    z = std::conj(z);
    m = -m;
  }
  Cplx acc(1.0, 0.0);
  while (m > 0) {
    if (m & 1) acc *= z;
    z *= z;
    m >>= 1;
  }
  return acc;
}

}  // namespace

CorrelationSequence representation_correlation(const Cocycle& phi,
                                               const RotationNumber& alpha, int k,
                                               const std::vector<long long>& n_schedule,
                                               int grid_size) {
  require_schedule(n_schedule);
  if (k < 0) throw std::invalid_argument("representation index must be nonnegative");
  if (grid_size < 1) throw std::invalid_argument("grid size must be positive");

  const std::size_t points = static_cast<std::size_t>(grid_size);
  const std::size_t steps = n_schedule.size();

  // One slot per (grid point, schedule entry).  Each point walks the whole
  // schedule with a single running product, so the cost is the largest n,
  // not the sum of the scheduled ones.
  std::vector<Eigen::MatrixXcd> slots(points * steps);
  parallel::for_each_index(points, [&](std::size_t i) {
    const CirclePoint x(static_cast<double>(i) / static_cast<double>(grid_size));
    GroupElement product;
    long long reached = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      for (long long j = reached; j < n_schedule[s]; ++j) {
        product = product * phi.value(rotate(x, alpha, j));
      }
      reached = n_schedule[s];
      slots[i * steps + s] = pi_k(k, product).entries;
    }
  });

  CorrelationSequence seq;
  seq.k = k;
  seq.terms.reserve(steps);
  std::vector<Eigen::MatrixXcd> column(points);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < points; ++i) column[i] = slots[i * steps + s];
    Eigen::MatrixXcd mean = pairwise(column, 0, points) / static_cast<double>(points);
    CorrelationSequence::Term term;
    term.n = n_schedule[s];
    term.norm = representation_norm(mean);
    term.matrix = std::move(mean);
    seq.terms.push_back(std::move(term));
  }
  return seq;
}

MixingReport mixing_diagnostic(const CorrelationSequence& seq) {
  if (seq.terms.size() < 4) {
    throw InsufficientDataError("mixing diagnostic needs at least four correlation terms");
  }
  std::vector<double> norms;
  norms.reserve(seq.terms.size());
  for (const auto& t : seq.terms) norms.push_back(t.norm);

  MixingReport report;
  report.decays = quartile_decay(norms);

  // Rate fit on log-log axes.  Zero norms carry no slope information (their
  // logarithm is -infinity), so they are skipped; n = 0 likewise.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& t : seq.terms) {
    if (t.n <= 0 || t.norm == 0.0) continue;
    const double lx = std::log(static_cast<double>(t.n));
    const double ly = std::log(t.norm);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) {
    report.fitted_rate = -std::numeric_limits<double>::infinity();
    return report;
  }
  const double den = static_cast<double>(m) * sxx - sx * sx;
  report.fitted_rate = (static_cast<double>(m) * sxy - sx * sy) / den;
  return report;
}

LebesgueBoundReport lebesgue_bound_check(const CorrelationSequence& seq) {
  std::vector<double> products;
  for (const auto& t : seq.terms) {
    if (t.n < 16) continue;
    products.push_back(static_cast<double>(t.n) * t.norm);
  }
  if (products.size() < 3) {
    throw InsufficientDataError("Lebesgue bound check needs at least three terms with n >= 16");
  }

  LebesgueBoundReport report;
  report.c_estimate = *std::max_element(products.begin(), products.end());

  // Spearman rank correlation between n and n * norm.  The n values are
  // strictly increasing, so their ranks are 0..m-1; ties among the products
  // get the average of the ranks they span.
  const std::size_t m = products.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return products[a] < products[b]; });
  std::vector<double> rank(m, 0.0);
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j + 1 < m && products[order[j + 1]] == products[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j);
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = shared;
    i = j + 1;
  }
  const double mean_rank = 0.5 * static_cast<double>(m - 1);
  double num = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = static_cast<double>(i) - mean_rank;
    const double dy = rank[i] - mean_rank;
    num += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  report.spearman = (var_y == 0.0) ? 0.0 : num / std::sqrt(var_x * var_y);
  report.holds_uniformly = report.spearman <= 0.2;
  return report;
}

SpectralCoefficients spectral_coefficients(
    const std::function<std::complex<double>(CirclePoint)>& gamma,
    const RotationNumber& alpha, int m,
    const std::function<std::complex<double>(CirclePoint)>& f, long long n_max,
    int grid_size, std::string f_label) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  if (grid_size < 1) throw std::invalid_argument("grid size must be positive");

  const std::size_t points = static_cast<std::size_t>(grid_size);
  const std::size_t count = static_cast<std::size_t>(2 * n_max + 1);

  // Unimodularity check up front: the inverse-iterate formula below relies
  // on conj(gamma) being 1/gamma.
  std::vector<double> worst(points);
  parallel::for_each_index(points, [&](std::size_t i) {
    const CirclePoint x(static_cast<double>(i) / static_cast<double>(grid_size));
    worst[i] = std::abs(std::abs(gamma(x)) - 1.0);
  });
  const double off = *std::max_element(worst.begin(), worst.end());
  if (off > 1e-6) {
    throw NotUnimodularError("gamma is not unimodular on the grid (deviation " +
                             std::to_string(off) + ")");
  }

  // slots[i * count + (n + n_max)] holds the point's contribution to
  // sigma_hat(n).  Forward and backward running products of gamma along the
  // orbit are extended one factor per step.
  std::vector<Cplx> slots(points * count);
  parallel::for_each_index(points, [&](std::size_t i) {
    const CirclePoint x(static_cast<double>(i) / static_cast<double>(grid_size));
    const Cplx fx_bar = std::conj(f(x));
    Cplx forward(1.0, 0.0);
    Cplx backward(1.0, 0.0);
    slots[i * count + static_cast<std::size_t>(n_max)] = f(x) * fx_bar;
    for (long long n = 1; n <= n_max; ++n) {
      forward *= gamma(rotate(x, alpha, n - 1));
      backward *= std::conj(gamma(rotate(x, alpha, -n)));
      slots[i * count + static_cast<std::size_t>(n_max + n)] =
          unit_ipow(forward, m) * f(rotate(x, alpha, n)) * fx_bar;
      slots[i * count + static_cast<std::size_t>(n_max - n)] =
          unit_ipow(backward, m) * f(rotate(x, alpha, -n)) * fx_bar;
    }
  });

  SpectralCoefficients out;
  out.f_label = std::move(f_label);
  out.coefficients.reserve(count);
  std::vector<Cplx> column(points);
  for (long long n = -n_max; n <= n_max; ++n) {
    for (std::size_t i = 0; i < points; ++i) {
      column[i] = slots[i * count + static_cast<std::size_t>(n + n_max)];
    }
    const Cplx mean = pairwise(column, 0, points) / static_cast<double>(points);
    out.coefficients.emplace_back(n, mean);
  }
  return out;
}

CoboundaryReport coboundary_obstruction(
    const std::function<std::complex<double>(TorusPoint)>& phi, double alpha,
    double beta, const std::vector<long long>& n_schedule, int grid1, int grid2,
    const std::vector<double>& x2_breakpoints) {
  require_schedule(n_schedule);
  if (grid1 < 1 || grid2 < 1) throw std::invalid_argument("grid sizes must be positive");

  // Build the x2 quadrature cells.  Without breakpoints this is the uniform
  // midpoint rule; with them, [0,1) is first cut at each breakpoint and the
  // grid2 cells are distributed over the pieces in proportion to length, so
  // no cell straddles a cut.
  std::vector<double> x2_nodes;
  std::vector<double> x2_weights;
  if (x2_breakpoints.empty()) {
    for (int j = 0; j < grid2; ++j) {
      x2_nodes.push_back((static_cast<double>(j) + 0.5) / static_cast<double>(grid2));
      x2_weights.push_back(1.0 / static_cast<double>(grid2));
    }
  } else {
    std::vector<double> cuts;
    for (double b : x2_breakpoints) cuts.push_back(wrap_unit(b));
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      const double lo = cuts[p];
      const double len = cuts[p + 1] - lo;
      if (len <= 0.0) continue;
      const int cells = std::max(1, static_cast<int>(std::lround(len * grid2)));
      for (int j = 0; j < cells; ++j) {
        x2_nodes.push_back(lo + (static_cast<double>(j) + 0.5) * len / cells);
        x2_weights.push_back(len / cells);
      }
    }
  }

  const std::size_t nx1 = static_cast<std::size_t>(grid1);
  const std::size_t nx2 = x2_nodes.size();
  const std::size_t points = nx1 * nx2;
  const std::size_t steps = n_schedule.size();

  // Weighted per-point contributions; the x1 direction is the plain mean.
  std::vector<Cplx> slots(points * steps);
  parallel::for_each_index(points, [&](std::size_t i) {
    const std::size_t i1 = i / nx2;
    const std::size_t i2 = i % nx2;
    const double x1 = static_cast<double>(i1) / static_cast<double>(grid1);
    const double x2 = x2_nodes[i2];
    const double weight = x2_weights[i2] / static_cast<double>(grid1);
    Cplx product(1.0, 0.0);
    long long reached = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      for (long long j = reached; j < n_schedule[s]; ++j) {
        product *= phi(TorusPoint(x1 + frac_mul(j, alpha), x2 + frac_mul(j, beta)));
      }
      reached = n_schedule[s];
      slots[i * steps + s] = weight * product;
    }
  });

  CoboundaryReport report;
  report.integrals.reserve(steps);
  std::vector<double> norms;
  std::vector<Cplx> column(points);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < points; ++i) column[i] = slots[i * steps + s];
    const double value = std::abs(pairwise(column, 0, points));
    report.integrals.emplace_back(n_schedule[s], value);
    norms.push_back(value);
  }
  report.tends_to_zero = norms.size() >= 4 && quartile_decay(norms);
  return report;
}

}  // namespace su2dyn

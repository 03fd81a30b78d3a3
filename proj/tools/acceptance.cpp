// Acceptance gate.  Thirteen numbered criteria, one line each, covering the
// analytic anchors (exact degrees, representation identities), the
// quantitative bounds (quantization gaps, the 1/n correlation envelope), the
// renormalization closed forms, the suspension flow, and the bit-level
// determinism of the experiment runner.  Exit status 0 only when every
// criterion passes.
//
// Usage: su2dyn_acceptance [--cli PATH] [--configs DIR] [--work DIR]
//                          [--threads N]
// The CLI path and config directory are only needed for the determinism
// criterion; defaults assume a run from the repository root.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "su2dyn/cocycle.hpp"
#include "su2dyn/flows2d.hpp"
#include "su2dyn/irreps.hpp"
#include "su2dyn/parallel.hpp"
#include "su2dyn/renorm.hpp"
#include "su2dyn/rng.hpp"
#include "su2dyn/rotations.hpp"
#include "su2dyn/spectral.hpp"
#include "su2dyn/su2.hpp"

namespace {

using namespace su2dyn;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return std::string(buf);
}

AlgebraElement draw_algebra(const CounterRng& rng, std::uint64_t i, double lo, double hi) {
  const std::uint64_t c = i * 3;
  const double r = rng.log_uniform(c, lo, hi);
  const double z = rng.uniform(c + 1, -1.0, 1.0);
  const double angle = rng.uniform(c + 2, 0.0, kTwoPi);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return AlgebraElement{r * z, r * rho * std::cos(angle), r * rho * std::sin(angle)};
}

AlgebraElement su2_log(const GroupElement& g) {
  const double p = g.z1().imag();
  const double q = g.z2().real();
  const double r = g.z2().imag();
  const double s = std::sqrt(p * p + q * q + r * r);
  if (s == 0.0) return AlgebraElement{0.0, 0.0, 0.0};
  const double f = std::atan2(s, g.z1().real()) / s;
  return AlgebraElement{f * p, f * q, f * r};
}

Cocycle spectral_example() {
  // Diagonal phase with a periodized-Bernoulli term (sharply C2) under a
  // two-factor conjugation; the workhorse for the decay criteria.
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
  return Cocycle::conjugated(Cocycle::diagonal(1, phase), q, RotationNumber::golden());
}

Cocycle analytic_conjugated(int winding) {
  TrigPoly phase;
  phase.sin_coeff = {0.3};
  TrigPoly f1;
  f1.cos_coeff = {0.2};
  TrigPoly f2;
  f2.sin_coeff = {0.0, 0.12};
  Conjugator q;
  q.add_factor(f1, AlgebraElement{0.0, 1.0, 0.0});
  q.add_factor(f2, AlgebraElement{0.6, 0.0, 0.8});
  return Cocycle::conjugated(Cocycle::diagonal(winding, phase), q, RotationNumber::golden());
}

// ---------------------------------------------------------------------------
// Criteria 1-2: exact degree anchors.

Outcome degree_exactness() {
  const std::vector<long long> schedule{1, 2, 3, 5, 8, 16, 64};
  double worst = 0.0;
  const std::vector<std::pair<int, RotationNumber>> cases{
      {3, RotationNumber::from_double(0.41421356237309503)},
      {1, RotationNumber::golden()}};
  for (const auto& [k, alpha] : cases) {
    const DegreeReport report = degree(Cocycle::diagonal(k), alpha, schedule, 4096);
    for (const auto& [n, estimate] : report.estimates) {
      worst = std::max(worst, std::abs(estimate - kTwoPi * k));
    }
  }
  return Outcome{worst < 1e-10, fmt("worst per-n gap %.2e (bound 1e-10)", worst)};
}

Outcome degree_of_constants() {
  const std::vector<long long> schedule{16, 64, 256};
  double worst = 0.0;
  for (const AlgebraElement& v :
       {AlgebraElement{0.4, 0.1, 0.9}, AlgebraElement{0.0, 0.0, 1.3}}) {
    const DegreeReport report = degree(Cocycle::constant(exponential(v)),
                                       RotationNumber::golden(), schedule, 512);
    for (const auto& [n, estimate] : report.estimates) {
      worst = std::max(worst, std::abs(estimate));
    }
    worst = std::max(worst, std::abs(report.extrapolated));
  }
  return Outcome{worst < 1e-15, fmt("worst estimate %.2e (bound 1e-15)", worst)};
}

// ---------------------------------------------------------------------------
// Criterion 3: quantization of the degree over the golden rotation.

Outcome degree_quantization() {
  std::vector<Cocycle> conjugates;
  {
    TrigPoly phase;
    phase.sin_coeff = {0.4};
    TrigPoly f;
    f.cos_coeff = {0.3};
    Conjugator q;
    q.add_factor(f, AlgebraElement{0.0, 1.0, 0.0});
    conjugates.push_back(
        Cocycle::conjugated(Cocycle::diagonal(0, phase), q, RotationNumber::golden()));
  }
  conjugates.push_back(analytic_conjugated(1));
  conjugates.push_back(spectral_example());
  {
    TrigPoly phase;
    phase.cos_coeff = {0.25};
    TrigPoly f;
    f.sin_coeff = {0.0, 0.12};
    Conjugator q;
    q.add_factor(f, AlgebraElement{0.6, 0.0, 0.8});
    conjugates.push_back(
        Cocycle::conjugated(Cocycle::diagonal(2, phase), q, RotationNumber::golden()));
  }
  conjugates.push_back(analytic_conjugated(3));

  const std::vector<long long> schedule{2048, 4096, 8192};
  double worst = 0.0;
  for (const Cocycle& phi : conjugates) {
    const DegreeReport report = degree(phi, RotationNumber::golden(), schedule, 4096);
    const double nearest = kTwoPi * std::round(report.extrapolated / kTwoPi);
    worst = std::max(worst, std::abs(report.extrapolated - nearest));
  }
  return Outcome{worst < 1e-2,
                 fmt("5 conjugates, worst gap to 2 pi N %.2e (bound 1e-2)", worst)};
}

// ---------------------------------------------------------------------------
// Criteria 4-6: representation identities and the diagonalizer.

Outcome determinant_identity() {
  const CounterRng rng(401);
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    for (int i = 0; i < 1000; ++i) {
      const AlgebraElement a = draw_algebra(rng, static_cast<std::uint64_t>(k) * 10000 + i,
                                            1e-3, 1e3);
      worst = std::max(worst, verify_determinant_identity(k, a).rel_error);
    }
  }
  return Outcome{worst < 1e-9, fmt("worst relative error %.2e (bound 1e-9)", worst)};
}

Outcome norm_sandwich_and_inverse() {
  const CounterRng rng(502);
  int violations = 0;
  for (int k = 1; k <= 4; ++k) {
    for (int i = 0; i < 1000; ++i) {
      const AlgebraElement a = draw_algebra(rng, static_cast<std::uint64_t>(k) * 10000 + i,
                                            1e-3, 1e3);
      const NormSandwichReport sandwich = verify_norm_sandwich(k, a);
      if (!sandwich.lower_ok || !sandwich.upper_ok) ++violations;
      if (!inverse_bound_check(k, a).ok) ++violations;
    }
  }
  return Outcome{violations == 0, fmt("%d violations over 4000 draws (bound 0)", violations)};
}

Outcome diagonalizer_residual() {
  const CounterRng rng(603);
  double worst = 0.0;
  auto residual = [](const AlgebraElement& a) {
    const AlgebraElement diag = adjoint(diagonalizer(a), a);
    const AlgebraElement want{norm(a), 0.0, 0.0};
    return norm(diag - want) / norm(a);
  };
  for (int i = 0; i < 1000; ++i) {
    worst = std::max(worst, residual(draw_algebra(rng, i, 1e-3, 1e3)));
  }
  // The two degenerate axes where the generic closed form divides by zero.
  worst = std::max(worst, residual(AlgebraElement{2.0, 0.0, 0.0}));
  worst = std::max(worst, residual(AlgebraElement{-2.0, 0.0, 0.0}));
  return Outcome{worst < 1e-10, fmt("worst relative residual %.2e (bound 1e-10)", worst)};
}

// ---------------------------------------------------------------------------
// Criterion 7: the derivative-sum identity against finite differences.

Outcome derivative_sum_vs_fd() {
  const RotationNumber alpha = RotationNumber::golden();
  const long long n = 20;
  const double h = 1e-6;
  TrigPoly p1;
  p1.sin_coeff = {0.3};
  TrigPoly p2;
  p2.cos_coeff = {0.2};
  const std::vector<Cocycle> cocycles{Cocycle::diagonal(1, p1), Cocycle::diagonal(2, p2),
                                      analytic_conjugated(1)};
  double worst = 0.0;
  for (const Cocycle& phi : cocycles) {
    for (double x : {0.123, 0.456, 0.789}) {
      GroupElement product;
      AlgebraElement sum{0.0, 0.0, 0.0};
      for (long long j = 0; j < n; ++j) {
        const auto [value, logd] =
            phi.value_and_log_derivative(rotate(CirclePoint(x), alpha, j));
        sum = sum + adjoint(product, logd);
        product = product * value;
      }
      const GroupElement fwd = iterate(phi, alpha, n, CirclePoint(x + h));
      const GroupElement bwd = iterate(phi, alpha, n, CirclePoint(x - h));
      const AlgebraElement fd = su2_log(fwd * bwd.inverse()) * (1.0 / (2.0 * h));
      worst = std::max(worst, norm(fd - sum) / norm(sum));
    }
  }
  return Outcome{worst < 1e-4, fmt("worst relative error %.2e at n=20 (bound 1e-4)", worst)};
}

// ---------------------------------------------------------------------------
// Criterion 8: decay of the normalized second derivative.

Outcome second_derivative_decay() {
  TrigPoly p1;
  p1.sin_coeff = {0.3};
  TrigPoly p2;
  p2.bernoulli4_coeff = {40.0};
  const std::vector<Cocycle> cocycles{Cocycle::diagonal(1, p1), Cocycle::diagonal(1, p2),
                                      spectral_example()};
  double worst_ratio = 0.0;
  for (const Cocycle& phi : cocycles) {
    double previous = -1.0;
    for (long long n = 128; n <= 4096; n *= 2) {
      const DerivativeAccumulation acc =
          second_log_derivative_sum(phi, RotationNumber::golden(), n, 256);
      std::vector<double> norms;
      norms.reserve(acc.values.size());
      for (const AlgebraElement& v : acc.values) norms.push_back(norm(v));
      const double mean = parallel::pairwise_mean(norms);
      if (previous >= 0.0) worst_ratio = std::max(worst_ratio, mean / previous);
      previous = mean;
    }
  }
  return Outcome{worst_ratio < 1.10,
                 fmt("worst step ratio %.3f over n=2^7..2^12 (bound 1.10)", worst_ratio)};
}

// ---------------------------------------------------------------------------
// Criterion 9: the 1/n correlation envelope for the odd representations.

Outcome lebesgue_envelope() {
  const Cocycle phi = spectral_example();
  const std::vector<long long> schedule{16, 32, 64, 128, 256, 512};
  double worst_spearman = -1.0;
  bool all_hold = true;
  for (int irrep : {1, 3}) {
    const CorrelationSequence seq =
        representation_correlation(phi, RotationNumber::golden(), irrep, schedule, 4096);
    const LebesgueBoundReport bound = lebesgue_bound_check(seq);
    all_hold = all_hold && bound.holds_uniformly;
    worst_spearman = std::max(worst_spearman, bound.spearman);
  }
  return Outcome{all_hold, fmt("odd irreps 1, 3: worst Spearman %.3f (bound 0.2)",
                               worst_spearman)};
}

// ---------------------------------------------------------------------------
// Criterion 10: renormalization closed forms, monotonicity, fixed family.

QuadraticIrrational qi_frac(long long num, long long den) {
  return QuadraticIrrational(Rational(num, den), Rational(0, 1));
}

Outcome renormalization() {
  const QuadraticIrrational alpha = QuadraticIrrational::golden();
  const QuadraticIrrational alpha_sq = QuadraticIrrational(1) - alpha;
  TrigPoly phase;
  phase.sin_coeff = {0.3};
  const Cocycle base = Cocycle::diagonal(1, phase);

  // Composed renormalization against the direct product over the induced
  // interval dynamics, with the depth-n scaling applied up front.
  const std::vector<long long> fib = fibonacci_denominators(14);
  double closed_form_worst = 0.0;
  RenormState state = RenormState::from_cocycle(base, RotationNumber::golden());
  for (int n = 1; n <= 12; ++n) {
    state = renorm_apply(state);
    for (const QuadraticIrrational& u :
         {-(alpha_sq * qi_frac(3, 7)), alpha * qi_frac(3, 7)}) {
      QuadraticIrrational y = u;
      for (int j = 0; j < n; ++j) y = -(alpha * y);
      const long long steps = u.sign() < 0 ? fib[n] : fib[n + 1];
      GroupElement product;
      for (long long j = 0; j < steps; ++j) {
        product = product * base.value(CirclePoint(y.to_double()));
        y = y.sign() < 0 ? y + alpha : y - alpha_sq;
      }
      closed_form_worst =
          std::max(closed_form_worst, distance(state.evaluate(u).value, product));
    }
  }
  if (closed_form_worst >= 1e-9) {
    return Outcome{false, fmt("closed-form residual %.2e (bound 1e-9)", closed_form_worst)};
  }

  double l1_growth = 0.0;
  for (const Cocycle& phi : {base, analytic_conjugated(1)}) {
    RenormState trace = RenormState::from_cocycle(phi, RotationNumber::golden());
    double previous = l1_log_derivative_norm(trace, 1024);
    for (int d = 1; d <= 12; ++d) {
      trace = renorm_apply(trace);
      const double current = l1_log_derivative_norm(trace, 1024);
      l1_growth = std::max(l1_growth, current - previous);
      previous = current;
    }
  }
  if (l1_growth > 1e-8) {
    return Outcome{false, fmt("L1 norm grew by %.2e along a trace (bound 1e-8)", l1_growth)};
  }

  const AlgebraElement generator{0.3, 0.4, 1.2};
  RenormState family = RenormState::fixed_family(generator, exponential(generator * 0.7),
                                                 exponential(generator * -0.3));
  double family_worst = 0.0;
  for (int d = 0; d <= 6; ++d) {
    family_worst = std::max(family_worst, fixed_point_residual(family, 256));
    if (d < 6) family = renorm_apply(family);
  }
  if (family_worst >= 1e-10) {
    return Outcome{false, fmt("fixed-family residual %.2e (bound 1e-10)", family_worst)};
  }

  const RenormState deep = renorm_iterate(
      RenormState::from_cocycle(base, RotationNumber::golden()), 12);
  const ConsistencyReport limits = consistency_limit_check(deep, 256);
  if (!limits.ratio_ok) {
    return Outcome{false, fmt("branch scaling ratio %.4f off alpha by > 5%%",
                              limits.ratio)};
  }
  return Outcome{true, fmt("closed form %.1e, L1 monotone, family %.1e, ratio ok",
                           closed_form_worst, family_worst)};
}

// ---------------------------------------------------------------------------
// Criterion 11: the suspension flow and its degree transport.

Outcome flow_suspension() {
  const double omega = 0.6180339887498949;
  const double beta = 0.5857864376269049;
  const SuspendedFlow flow = suspend(contract_loop(1), omega);
  const Cocycle psi = Cocycle::diagonal(1);

  double endpoint_worst = 0.0;
  for (int i = 0; i < 1024; ++i) {
    const double x = static_cast<double>(i) / 1024.0;
    endpoint_worst = std::max(
        endpoint_worst, distance(flow.at_raw(1.0, x, 0.0), psi.value(CirclePoint(x))));
  }
  if (endpoint_worst >= 1e-9) {
    return Outcome{false, fmt("time-one section residual %.2e (bound 1e-9)", endpoint_worst)};
  }

  double law_worst = 0.0;
  for (const auto& [t, s] :
       std::vector<std::pair<double, double>>{{0.4, 0.7}, {1.2, 1.9}, {0.5, 0.25}}) {
    for (const auto& p : {TorusPoint(0.21, 0.66), TorusPoint(0.83, 0.09)}) {
      const GroupElement whole = flow.at(t + s, p);
      const GroupElement split =
          flow.at(t, p) * flow.at_raw(s, p.x1 + t * omega, p.x2 + t);
      law_worst = std::max(law_worst, distance(whole, split));
    }
  }
  if (law_worst >= 1e-8) {
    return Outcome{false, fmt("cocycle law residual %.2e (bound 1e-8)", law_worst)};
  }

  const std::vector<long long> schedule{64, 128, 256};
  double gap_worst = 0.0;
  for (int k : {1, 2}) {
    const TransportReport transport =
        degree_transport_check(contract_loop(k), omega, beta, schedule, 24, 24);
    gap_worst = std::max(gap_worst, transport.rel_gap);
  }
  return Outcome{gap_worst < 0.02,
                 fmt("endpoint %.1e, law %.1e, transport gap %.2e (bound 2e-2)",
                     endpoint_worst, law_worst, gap_worst)};
}

// ---------------------------------------------------------------------------
// Criterion 12: the two-branch coboundary obstruction.

Outcome coboundary_obstruction_decay() {
  const double omega = 0.6180339887498949;
  const double beta = 1.0 - omega;
  const auto two_branch = [&](TorusPoint p) {
    if (p.x2 < 1.0 - beta) return std::complex<double>(1.0, 0.0);
    return std::polar(1.0, kTwoPi * (p.x1 - p.x2 * omega));
  };
  const std::vector<long long> schedule{1, 2, 3, 4, 6, 8, 12, 16};
  const CoboundaryReport decaying = coboundary_obstruction(
      two_branch, omega, beta, schedule, 64, 89, {0.0, 1.0 - beta});

  const auto constant = [](TorusPoint) { return std::complex<double>(1.0, 0.0); };
  const CoboundaryReport flat =
      coboundary_obstruction(constant, omega, beta, schedule, 64, 89);

  const bool pass = decaying.tends_to_zero && !flat.tends_to_zero;
  return Outcome{pass, fmt("two-branch decays: %s, constant decays: %s",
                           decaying.tends_to_zero ? "yes" : "no",
                           flat.tends_to_zero ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// Criterion 13: bit-identical runner output across thread counts.

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome cli_determinism(const std::string& cli, const std::string& configs,
                        const std::string& work) {
  namespace fs = std::filesystem;
  if (!fs::exists(cli)) {
    return Outcome{false, "runner binary not found at " + cli};
  }
  fs::create_directories(work);

  struct Job {
    const char* name;
    const char* subcommand;
    std::string config;
  };
  const std::vector<Job> jobs{
      {"degree_constant", "degree", configs + "/degree_constant.json"},
      {"degree_diagonal", "degree", configs + "/degree_diagonal.json"},
      {"spectrum_conjugated", "spectrum", configs + "/spectrum_conjugated.json"},
      {"flow_two_branch", "flow", configs + "/flow_two_branch.json"},
      {"flow_suspension", "flow", configs + "/flow_suspension.json"},
      {"verify_irreps", "verify-irreps", ""}};
  for (const Job& job : jobs) {
    std::vector<std::string> outputs;
    for (int threads : {1, 8}) {
      const std::string out =
          work + "/" + job.name + ".t" + std::to_string(threads) + ".csv";
      std::string command = "\"" + cli + "\" " + job.subcommand;
      command += job.config.empty() ? " --seed 42" : " --config \"" + job.config + "\"";
      command += " --out \"" + out + "\" --threads " + std::to_string(threads);
      command += " > /dev/null 2>&1";
      if (std::system(command.c_str()) != 0) {
        return Outcome{false, std::string("runner failed on ") + job.name};
      }
      outputs.push_back(read_file(out));
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) {
      return Outcome{false, std::string("tables differ for ") + job.name};
    }
  }
  return Outcome{true, fmt("%d runs byte-identical at --threads 1 and 8",
                           static_cast<int>(jobs.size()))};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = "build/tools/su2dyn";
  std::string configs = "configs";
  std::string work = (std::filesystem::temp_directory_path() / "su2dyn_acceptance").string();
  int threads = 8;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--configs") configs = argv[i + 1];
    if (flag == "--work") work = argv[i + 1];
    if (flag == "--threads") threads = std::atoi(argv[i + 1]);
  }
  parallel::set_threads(threads);

  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {"degree-exactness", degree_exactness},
      {"degree-of-constants", degree_of_constants},
      {"degree-quantization", degree_quantization},
      {"determinant-identity", determinant_identity},
      {"norm-sandwich-and-inverse", norm_sandwich_and_inverse},
      {"diagonalizer", diagonalizer_residual},
      {"derivative-sum-vs-fd", derivative_sum_vs_fd},
      {"second-derivative-decay", second_derivative_decay},
      {"lebesgue-envelope", lebesgue_envelope},
      {"renormalization", renormalization},
      {"flow-suspension", flow_suspension},
      {"coboundary-obstruction", coboundary_obstruction_decay}};

  int passed = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = criterion.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    passed += outcome.pass ? 1 : 0;
    std::printf("criterion %02d %-26s %s  %s  [%.1fs]\n", index, criterion.name,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = cli_determinism(cli, configs, work);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    passed += outcome.pass ? 1 : 0;
    std::printf("criterion %02d %-26s %s  %s  [%.1fs]\n", index, "cli-determinism",
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
  }

  std::printf("acceptance: %d/%d criteria passed\n", passed, index);
  return passed == index ? 0 : 1;
}

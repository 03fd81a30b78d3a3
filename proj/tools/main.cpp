// Experiment runner.  Declarative cocycle descriptions come in as JSON
// configs (real-valued parameters as decimal strings, "golden" as a keyword
// selecting exact golden-ratio arithmetic), results go out as CSV rows
// (id, n, metric, value) plus a JSON metadata sidecar.  Everything except
// the recorded wall time is bit-reproducible for a fixed config and seed,
// independent of the thread count.
//
// Subcommands: degree, spectrum, renorm, flow, verify-irreps.
// Exit codes: 0 ok, 2 config error, 3 precondition violation, 4 numerical
// failure (NaN in an emitted value).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

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

using nlohmann::json;
using namespace su2dyn;

constexpr const char* kVersion = "1.0.0";
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Anything wrong with the config file or the flags: exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config parsing

struct FixedFamilySpec {
  AlgebraElement generator;
  AlgebraElement left_exponent;
  AlgebraElement right_exponent;
};

struct ExperimentConfig {
  std::string id = "experiment";
  std::string kind;  // empty when only a fixed family is described
  int winding = 1;
  TrigPoly phase;
  AlgebraElement constant_exponent;
  std::vector<std::pair<TrigPoly, AlgebraElement>> conjugator_factors;
  std::optional<FixedFamilySpec> fixed_family;
  bool alpha_golden = false;
  double alpha = 0.0;
  std::optional<double> beta;
  std::vector<long long> schedule;
  int grid = 256;
  int grid2 = 0;  // falls back to grid when unset
  int depth = 6;
  int irrep_k = 1;
  int samples = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::uint64_t hash = 0;
};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

double parse_real(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError(where + ": '" + s + "' is not a decimal");
    }
    if (pos != s.size()) throw ConfigError(where + ": '" + s + "' is not a decimal");
    return v;
  }
  throw ConfigError(where + " must be a decimal string or a number");
}

long long parse_integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError(where + ": '" + s + "' is not an integer");
    }
    if (pos != s.size()) throw ConfigError(where + ": '" + s + "' is not an integer");
    return v;
  }
  throw ConfigError(where + " must be an integer");
}

std::vector<double> parse_real_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be a list");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_real(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

AlgebraElement parse_algebra(const json& j, const std::string& where) {
  const std::vector<double> v = parse_real_list(j, where);
  if (v.size() != 3) throw ConfigError(where + " needs exactly three components");
  return AlgebraElement{v[0], v[1], v[2]};
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

TrigPoly parse_trig(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown_keys(j, {"constant", "cos", "sin", "bernoulli4"}, where);
  TrigPoly p;
  if (j.contains("constant")) p.constant = parse_real(j["constant"], where + ".constant");
  if (j.contains("cos")) p.cos_coeff = parse_real_list(j["cos"], where + ".cos");
  if (j.contains("sin")) p.sin_coeff = parse_real_list(j["sin"], where + ".sin");
  if (j.contains("bernoulli4")) {
    p.bernoulli4_coeff = parse_real_list(j["bernoulli4"], where + ".bernoulli4");
  }
  return p;
}

bool power_of_two(int g) { return g >= 2 && (g & (g - 1)) == 0; }

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  ExperimentConfig cfg;
  cfg.hash = fnv1a(text);

  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(root,
                      {"id", "cocycle", "rotation", "schedule", "grid", "grid2", "depth",
                       "irrep_k", "samples", "seed", "out"},
                      "config");

  if (root.contains("id")) {
    if (!root["id"].is_string()) throw ConfigError("id must be a string");
    cfg.id = root["id"].get<std::string>();
    if (cfg.id.empty() || cfg.id.find(',') != std::string::npos) {
      throw ConfigError("id must be nonempty and comma-free");
    }
  }

  if (root.contains("cocycle")) {
    const json& c = root["cocycle"];
    if (!c.is_object()) throw ConfigError("cocycle must be an object");
    reject_unknown_keys(c, {"kind", "winding", "k", "phase", "exponent", "conjugator",
                            "fixed_family"},
                        "cocycle");
    if (c.contains("kind")) {
      cfg.kind = c["kind"].get<std::string>();
      static const std::vector<std::string> kinds{"constant", "diagonal-fourier",
                                                  "conjugated-diagonal", "two-branch",
                                                  "suspended-flow"};
      bool known = false;
      for (const auto& k : kinds) known = known || cfg.kind == k;
      if (!known) throw ConfigError("unknown cocycle kind '" + cfg.kind + "'");
    }
    if (c.contains("winding")) {
      cfg.winding = static_cast<int>(parse_integer(c["winding"], "cocycle.winding"));
    }
    if (c.contains("k")) cfg.winding = static_cast<int>(parse_integer(c["k"], "cocycle.k"));
    if (c.contains("phase")) cfg.phase = parse_trig(c["phase"], "cocycle.phase");
    if (c.contains("exponent")) {
      cfg.constant_exponent = parse_algebra(c["exponent"], "cocycle.exponent");
    }
    if (c.contains("conjugator")) {
      const json& q = c["conjugator"];
      if (!q.is_array()) throw ConfigError("cocycle.conjugator must be a list");
      for (std::size_t i = 0; i < q.size(); ++i) {
        const std::string where = "cocycle.conjugator[" + std::to_string(i) + "]";
        reject_unknown_keys(q[i], {"exponent", "axis"}, where);
        if (!q[i].contains("exponent") || !q[i].contains("axis")) {
          throw ConfigError(where + " needs exponent and axis");
        }
        cfg.conjugator_factors.emplace_back(parse_trig(q[i]["exponent"], where + ".exponent"),
                                            parse_algebra(q[i]["axis"], where + ".axis"));
      }
    }
    if (c.contains("fixed_family")) {
      const json& f = c["fixed_family"];
      reject_unknown_keys(f, {"generator", "left_exponent", "right_exponent"},
                          "cocycle.fixed_family");
      FixedFamilySpec spec;
      if (!f.contains("generator") || !f.contains("left_exponent") ||
          !f.contains("right_exponent")) {
        throw ConfigError("fixed_family needs generator, left_exponent, right_exponent");
      }
      spec.generator = parse_algebra(f["generator"], "fixed_family.generator");
      spec.left_exponent = parse_algebra(f["left_exponent"], "fixed_family.left_exponent");
      spec.right_exponent = parse_algebra(f["right_exponent"], "fixed_family.right_exponent");
      cfg.fixed_family = spec;
    }
    if (cfg.kind.empty() && !cfg.fixed_family) {
      throw ConfigError("cocycle needs a kind or a fixed_family");
    }
  }

  if (root.contains("rotation")) {
    const json& r = root["rotation"];
    if (!r.is_object()) throw ConfigError("rotation must be an object");
    reject_unknown_keys(r, {"alpha", "beta"}, "rotation");
    if (r.contains("alpha")) {
      if (r["alpha"].is_string() && r["alpha"].get<std::string>() == "golden") {
        cfg.alpha_golden = true;
        cfg.alpha = RotationNumber::golden().alpha;
      } else {
        cfg.alpha = parse_real(r["alpha"], "rotation.alpha");
      }
    }
    if (r.contains("beta")) cfg.beta = parse_real(r["beta"], "rotation.beta");
  }

  if (root.contains("schedule")) {
    const json& s = root["schedule"];
    if (!s.is_array() || s.empty()) throw ConfigError("schedule must be a nonempty list");
    for (std::size_t i = 0; i < s.size(); ++i) {
      cfg.schedule.push_back(parse_integer(s[i], "schedule[" + std::to_string(i) + "]"));
    }
    for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
      if (cfg.schedule[i] < 1 || (i > 0 && cfg.schedule[i] <= cfg.schedule[i - 1])) {
        throw ConfigError("schedule must be strictly increasing and positive");
      }
    }
  }

  if (root.contains("grid")) cfg.grid = static_cast<int>(parse_integer(root["grid"], "grid"));
  if (!power_of_two(cfg.grid)) throw ConfigError("grid must be a power of two, at least 2");
  if (root.contains("grid2")) {
    cfg.grid2 = static_cast<int>(parse_integer(root["grid2"], "grid2"));
    if (!power_of_two(cfg.grid2)) throw ConfigError("grid2 must be a power of two, at least 2");
  }
  if (root.contains("depth")) {
    cfg.depth = static_cast<int>(parse_integer(root["depth"], "depth"));
    if (cfg.depth < 0 || cfg.depth > 16) throw ConfigError("depth must be in [0, 16]");
  }
  if (root.contains("irrep_k")) {
    cfg.irrep_k = static_cast<int>(parse_integer(root["irrep_k"], "irrep_k"));
    if (cfg.irrep_k < 1 || cfg.irrep_k > 8) throw ConfigError("irrep_k must be in [1, 8]");
  }
  if (root.contains("samples")) {
    cfg.samples = static_cast<int>(parse_integer(root["samples"], "samples"));
    if (cfg.samples < 1) throw ConfigError("samples must be positive");
  }
  if (root.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(parse_integer(root["seed"], "seed"));
  }
  if (root.contains("out")) cfg.out = root["out"].get<std::string>();
  return cfg;
}

// ---------------------------------------------------------------------------
// Result tables

struct ResultRow {
  std::string id;
  long long n = 0;
  std::string metric;
  double value = 0.0;
};

using ResultTable = std::vector<ResultRow>;

void push(ResultTable& table, const ExperimentConfig& cfg, long long n,
          const std::string& metric, double value) {
  table.push_back(ResultRow{cfg.id, n, metric, value});
}

std::string render_csv(const ResultTable& table) {
  std::string out = "id,n,metric,value\n";
  char buf[64];
  for (const ResultRow& row : table) {
    std::snprintf(buf, sizeof buf, "%.17g", row.value);
    out += row.id;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += row.metric;
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment runners

RotationNumber rotation_of(const ExperimentConfig& cfg) {
  return cfg.alpha_golden ? RotationNumber::golden() : RotationNumber::from_double(cfg.alpha);
}

Cocycle build_circle_cocycle(const ExperimentConfig& cfg, const RotationNumber& alpha) {
  if (cfg.kind == "constant") return Cocycle::constant(exponential(cfg.constant_exponent));
  if (cfg.kind == "diagonal-fourier") return Cocycle::diagonal(cfg.winding, cfg.phase);
  if (cfg.kind == "conjugated-diagonal") {
    Conjugator q;
    for (const auto& [exponent, axis] : cfg.conjugator_factors) q.add_factor(exponent, axis);
    return Cocycle::conjugated(Cocycle::diagonal(cfg.winding, cfg.phase), q, alpha);
  }
  throw ConfigError("kind '" + cfg.kind + "' does not describe a circle cocycle");
}

void require_schedule(const ExperimentConfig& cfg) {
  if (cfg.schedule.empty()) throw ConfigError("this experiment needs a schedule");
}

ResultTable run_degree(const ExperimentConfig& cfg) {
  require_schedule(cfg);
  const RotationNumber alpha = rotation_of(cfg);
  const Cocycle phi = build_circle_cocycle(cfg, alpha);
  ResultTable table;
  try {
    const DegreeReport report = degree(phi, alpha, cfg.schedule, cfg.grid);
    for (const auto& [n, estimate] : report.estimates) {
      push(table, cfg, n, "degree_estimate", estimate);
    }
    const long long last = cfg.schedule.back();
    push(table, cfg, last, "degree_extrapolated", report.extrapolated);
    push(table, cfg, last, "equivariance_residual", report.residual);
    const double nearest = kTwoPi * std::round(report.extrapolated / kTwoPi);
    push(table, cfg, last, "nearest_quantum", nearest);
    push(table, cfg, last, "quantum_gap", std::abs(report.extrapolated - nearest));
  } catch (const DegenerateFieldError&) {
    // A numerically vanishing field is a legitimate outcome (degree zero),
    // reported as a row rather than a crash.
    push(table, cfg, 0, "degenerate_field", 1.0);
  }
  return table;
}

ResultTable run_spectrum(const ExperimentConfig& cfg) {
  require_schedule(cfg);
  const RotationNumber alpha = rotation_of(cfg);
  const Cocycle phi = build_circle_cocycle(cfg, alpha);
  const CorrelationSequence seq =
      representation_correlation(phi, alpha, cfg.irrep_k, cfg.schedule, cfg.grid);
  ResultTable table;
  for (const auto& term : seq.terms) {
    push(table, cfg, term.n, "correlation_norm", term.norm);
    push(table, cfg, term.n, "n_times_norm", static_cast<double>(term.n) * term.norm);
  }
  const long long last = cfg.schedule.back();
  if (seq.terms.size() >= 4) {
    const MixingReport mix = mixing_diagnostic(seq);
    push(table, cfg, last, "mixing_decays", mix.decays ? 1.0 : 0.0);
    push(table, cfg, last, "mixing_rate", mix.fitted_rate);
  }
  int tail = 0;
  for (const auto& term : seq.terms) tail += term.n >= 16 ? 1 : 0;
  if (tail >= 3) {
    const LebesgueBoundReport bound = lebesgue_bound_check(seq);
    push(table, cfg, last, "lebesgue_c", bound.c_estimate);
    push(table, cfg, last, "lebesgue_spearman", bound.spearman);
    push(table, cfg, last, "lebesgue_uniform", bound.holds_uniformly ? 1.0 : 0.0);
  }
  return table;
}

ResultTable run_renorm(const ExperimentConfig& cfg) {
  if (!cfg.alpha_golden) {
    throw NotGoldenError("renorm requires rotation.alpha = \"golden\"");
  }
  RenormState state =
      cfg.fixed_family
          ? RenormState::fixed_family(cfg.fixed_family->generator,
                                      exponential(cfg.fixed_family->left_exponent),
                                      exponential(cfg.fixed_family->right_exponent))
          : RenormState::from_cocycle(build_circle_cocycle(cfg, RotationNumber::golden()),
                                      RotationNumber::golden());
  // Reference points in the interiors of the two branches of the induced
  // interval, where the renormalized cocycle is recorded concretely.
  const QuadraticIrrational alpha = QuadraticIrrational::golden();
  const QuadraticIrrational left_ref =
      -((QuadraticIrrational(1) - alpha) / QuadraticIrrational(2));
  const QuadraticIrrational right_ref = alpha / QuadraticIrrational(2);

  ResultTable table;
  for (int d = 0;; ++d) {
    push(table, cfg, d, "l1_norm", l1_log_derivative_norm(state, cfg.grid));
    push(table, cfg, d, "fixed_point_residual", fixed_point_residual(state, cfg.grid));
    push(table, cfg, d, "w10_continuous", state.w10_continuous() ? 1.0 : 0.0);
    const auto [left, right] = branch_mean_log_derivatives(state, cfg.grid);
    push(table, cfg, d, "left_branch_norm", norm(left));
    push(table, cfg, d, "right_branch_norm", norm(right));
    const GroupElement lv = state.value(left_ref);
    const GroupElement rv = state.value(right_ref);
    push(table, cfg, d, "left_value_z1_re", lv.z1().real());
    push(table, cfg, d, "left_value_z1_im", lv.z1().imag());
    push(table, cfg, d, "left_value_z2_re", lv.z2().real());
    push(table, cfg, d, "left_value_z2_im", lv.z2().imag());
    push(table, cfg, d, "right_value_z1_re", rv.z1().real());
    push(table, cfg, d, "right_value_z1_im", rv.z1().imag());
    push(table, cfg, d, "right_value_z2_re", rv.z2().real());
    push(table, cfg, d, "right_value_z2_im", rv.z2().imag());
    if (d == cfg.depth) break;
    state = renorm_apply(state);
  }
  if (cfg.depth >= 10 && cfg.depth % 2 == 0) {
    const ConsistencyReport consistency = consistency_limit_check(state, cfg.grid);
    push(table, cfg, cfg.depth, "branch_ratio", consistency.ratio);
    push(table, cfg, cfg.depth, "branch_ratio_ok", consistency.ratio_ok ? 1.0 : 0.0);
  }
  return table;
}

SuspensionPath build_path(const ExperimentConfig& cfg) {
  if (cfg.kind == "suspended-flow") return contract_loop(cfg.winding);
  if (cfg.kind == "constant") {
    // The straight-line path from the identity to the constant.
    const AlgebraElement exponent = cfg.constant_exponent;
    return SuspensionPath{
        [exponent](double s, CirclePoint) { return exponential(exponent * s); },
        Cocycle::constant(exponential(exponent))};
  }
  throw ConfigError("kind '" + cfg.kind + "' does not describe a suspension");
}

ResultTable run_flow(const ExperimentConfig& cfg) {
  require_schedule(cfg);
  if (!cfg.beta) throw ConfigError("flow experiments need rotation.beta");
  const double beta = *cfg.beta;
  ResultTable table;

  if (cfg.kind == "two-branch") {
    // Circle-valued two-branch cocycle: trivial off the return window, a
    // first-coordinate character on it.  The torus average I_n collapsing
    // to zero is the coboundary obstruction.
    const double omega = cfg.alpha;
    const int k = cfg.winding;
    const auto value = [omega, k, beta](TorusPoint p) {
      if (p.x2 < 1.0 - beta) return std::complex<double>(1.0, 0.0);
      return std::polar(1.0, kTwoPi * k * (p.x1 - p.x2 * omega));
    };
    const int grid2 = cfg.grid2 > 0 ? cfg.grid2 : cfg.grid;
    const CoboundaryReport report = coboundary_obstruction(
        value, cfg.alpha, beta, cfg.schedule, cfg.grid, grid2, {0.0, 1.0 - beta});
    for (const auto& [n, integral] : report.integrals) {
      push(table, cfg, n, "obstruction_integral", integral);
    }
    push(table, cfg, cfg.schedule.back(), "tends_to_zero", report.tends_to_zero ? 1.0 : 0.0);
    return table;
  }

  if (beta == 0.0) throw ConfigError("flow experiments need rotation.beta != 0");
  const double omega = cfg.alpha / beta;
  const SuspensionPath path = build_path(cfg);
  const SuspendedFlow flow = suspend(path, omega);
  const int grid2 = cfg.grid2 > 0 ? cfg.grid2 : cfg.grid;

  const TorusCocycle section = flow.time_sample(beta);
  for (long long n : cfg.schedule) {
    const DegreePair estimate =
        torus_degree(section, omega * beta, beta, {n}, cfg.grid, grid2);
    push(table, cfg, n, "flow_degree_d1", estimate.d1);
    push(table, cfg, n, "flow_degree_d2", estimate.d2);
  }

  const TransportReport transport =
      degree_transport_check(path, omega, beta, cfg.schedule, cfg.grid, grid2);
  const long long last = cfg.schedule.back();
  push(table, cfg, last, "transport_lhs_d1", transport.lhs.d1);
  push(table, cfg, last, "transport_lhs_d2", transport.lhs.d2);
  push(table, cfg, last, "transport_rhs_d1", transport.rhs.d1);
  push(table, cfg, last, "transport_rhs_d2", transport.rhs.d2);
  push(table, cfg, last, "transport_rel_gap", transport.rel_gap);

  // Spot checks of the flow law phi_{t+s} = phi_t (phi_s o S_t).
  for (const auto& [t, s] : std::vector<std::pair<double, double>>{{0.5, 0.25}, {1.0, 0.7}}) {
    double worst = 0.0;
    for (const auto& p : {TorusPoint(0.21, 0.66), TorusPoint(0.83, 0.09)}) {
      const GroupElement whole = flow.at(t + s, p);
      const GroupElement split =
          flow.at(t, p) * flow.at_raw(s, p.x1 + t * omega, p.x2 + t);
      worst = std::max(worst, distance(whole, split));
    }
    char label[64];
    std::snprintf(label, sizeof label, "law_residual(t=%g,s=%g)", t, s);
    push(table, cfg, 0, label, worst);
  }
  return table;
}

ResultTable run_verify_irreps(const ExperimentConfig& cfg) {
  if (!cfg.seed) {
    throw ConfigError("verify-irreps draws random elements and needs a seed");
  }
  const CounterRng rng(*cfg.seed);
  const int n = cfg.samples;
  ResultTable table;
  push(table, cfg, 0, "samples", static_cast<double>(n));
  for (int k = 1; k <= 4; ++k) {
    double det_worst = 0.0;
    int sandwich_violations = 0;
    int inverse_violations = 0;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t c = static_cast<std::uint64_t>(i) * 3;
      const double r = rng.log_uniform(c, 1e-3, 1e3);
      const double z = rng.uniform(c + 1, -1.0, 1.0);
      const double phi = rng.uniform(c + 2, 0.0, kTwoPi);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const AlgebraElement a{r * z, r * rho * std::cos(phi), r * rho * std::sin(phi)};
      det_worst = std::max(det_worst, verify_determinant_identity(k, a).rel_error);
      const NormSandwichReport sandwich = verify_norm_sandwich(k, a);
      if (!sandwich.lower_ok || !sandwich.upper_ok) ++sandwich_violations;
      if (!inverse_bound_check(k, a).ok) ++inverse_violations;
    }
    push(table, cfg, k, "det_identity_max_rel_error", det_worst);
    push(table, cfg, k, "sandwich_violations", static_cast<double>(sandwich_violations));
    push(table, cfg, k, "inverse_bound_violations", static_cast<double>(inverse_violations));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Output

int finish(const ExperimentConfig& cfg, const std::string& experiment,
           const ResultTable& table, double wall_seconds) {
  bool saw_nan = false;
  for (const ResultRow& row : table) saw_nan = saw_nan || std::isnan(row.value);

  const std::string csv = render_csv(table);
  if (cfg.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return 2;
    }
    out << csv;

    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(cfg.hash));
    const json meta{{"id", cfg.id},
                    {"experiment", experiment},
                    {"config_hash", hash},
                    {"version", kVersion},
                    {"wall_time_seconds", wall_seconds}};
    std::ofstream side(cfg.out + ".meta.json", std::ios::binary);
    side << meta.dump(2) << "\n";
  }

  if (saw_nan) {
    std::cerr << "numerical failure: NaN in results\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for SU(2) cocycles over irrational rotations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int threads = 1;
  int grid_override = 0;
  std::uint64_t seed_override = 0;
  app.add_option("--config", config_path, "experiment config file (JSON)");
  app.add_option("--out", out_override, "result CSV path (metadata sidecar alongside)");
  app.add_option("--threads", threads, "worker threads (results are thread-count independent)");
  app.add_option("--grid", grid_override, "override the config grid size");
  CLI::Option* seed_opt = app.add_option("--seed", seed_override, "override the config seed");

  CLI::App* degree_cmd = app.add_subcommand("degree", "degree estimates along a schedule");
  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "representation correlations and decay verdicts");
  CLI::App* renorm_cmd = app.add_subcommand("renorm", "golden renormalization trace");
  CLI::App* flow_cmd = app.add_subcommand("flow", "suspension flows and torus cocycles");
  CLI::App* verify_cmd =
      app.add_subcommand("verify-irreps", "representation identity and bound suite");
  for (CLI::App* sub : {degree_cmd, spectrum_cmd, renorm_cmd, flow_cmd, verify_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  parallel::set_threads(threads);

  const auto start = std::chrono::steady_clock::now();
  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = parse_config(config_path);
    } else if (!app.got_subcommand(verify_cmd)) {
      throw ConfigError("a config file is required (--config PATH)");
    } else {
      cfg.id = "verify-irreps";
      cfg.hash = fnv1a("builtin:verify-irreps");
    }
    if (grid_override > 0) {
      if (!power_of_two(grid_override)) throw ConfigError("grid must be a power of two");
      cfg.grid = grid_override;
    }
    if (seed_opt->count() > 0) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out = out_override;

    ResultTable table;
    std::string experiment;
    if (app.got_subcommand(degree_cmd)) {
      experiment = "degree";
      table = run_degree(cfg);
    } else if (app.got_subcommand(spectrum_cmd)) {
      experiment = "spectrum";
      table = run_spectrum(cfg);
    } else if (app.got_subcommand(renorm_cmd)) {
      experiment = "renorm";
      table = run_renorm(cfg);
    } else if (app.got_subcommand(flow_cmd)) {
      experiment = "flow";
      table = run_flow(cfg);
    } else {
      experiment = "verify-irreps";
      table = run_verify_irreps(cfg);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return finish(cfg, experiment, table, wall);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 3;
  }
}

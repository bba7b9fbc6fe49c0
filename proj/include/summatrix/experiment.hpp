#ifndef SUMMATRIX_EXPERIMENT_HPP
#define SUMMATRIX_EXPERIMENT_HPP

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "summatrix/checks.hpp"
#include "summatrix/fourier.hpp"
#include "summatrix/indices.hpp"
#include "summatrix/io.hpp"
#include "summatrix/matrix.hpp"
#include "summatrix/sequence.hpp"

namespace summatrix {

/// Bad or inconsistent experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exactly one source: a named generator, inline values, or a file.
struct SequenceSpec {
  std::string generator;
  std::vector<double> values;
  std::string file;

  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;
};

/// "canonical" builds λ_n = 1/X_n^2 and its companions from the weights;
/// an empty profile name reads the three sequences from their specs.
struct FactorSpec {
  std::string profile = "canonical";
  SequenceSpec lambda;
  SequenceSpec companion;
  SequenceSpec delta;

  friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

struct MatrixSpec {
  std::string factory = "weighted_mean";  // identity | weighted_mean | cesaro1
  std::string file;

  friend bool operator==(const MatrixSpec&, const MatrixSpec&) = default;
};

struct FunctionSpec {
  std::string name = "sawtooth";
  std::string table;

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::size_t N = 10000;
  std::vector<double> k{1.0};
  SequenceSpec weights{.generator = "ones"};
  FactorSpec factor;
  MatrixSpec matrix;
  FunctionSpec function;
  double x = std::numbers::pi / 2;
  /// 0 selects max(8192, 8N).
  std::size_t quadrature_points = 0;
  std::string output_dir;
  std::string emit = "both";
  Thresholds thresholds;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---- config (de)serialization -----------------------------------------------

inline json to_json(const SequenceSpec& s) {
  json j = json::object();
  if (!s.generator.empty()) j["generator"] = s.generator;
  if (!s.values.empty()) j["values"] = s.values;
  if (!s.file.empty()) j["file"] = s.file;
  return j;
}

inline SequenceSpec sequence_spec_from_json(const json& j, const std::string& what) {
  SequenceSpec s;
  if (j.is_string()) {
    s.generator = j.get<std::string>();
    return s;
  }
  if (!j.is_object()) throw ConfigError(what + ": expected a string or an object");
  s.generator = j.value("generator", std::string{});
  s.values = j.value("values", std::vector<double>{});
  s.file = j.value("file", std::string{});
  const int sources = !s.generator.empty() + !s.values.empty() + !s.file.empty();
  if (sources != 1) {
    throw ConfigError(what + ": give exactly one of generator, values, file");
  }
  return s;
}

inline json to_json(const ExperimentConfig& c) {
  json factor = {{"profile", c.factor.profile}};
  if (c.factor.profile.empty()) {
    factor["lambda"] = to_json(c.factor.lambda);
    factor["companion"] = to_json(c.factor.companion);
    factor["delta"] = to_json(c.factor.delta);
  }
  json matrix = json::object();
  if (!c.matrix.file.empty()) matrix["file"] = c.matrix.file;
  else matrix["factory"] = c.matrix.factory;
  json function = json::object();
  if (!c.function.table.empty()) function["table"] = c.function.table;
  else function["name"] = c.function.name;
  return {{"name", c.name},
          {"N", c.N},
          {"k", c.k},
          {"weights", to_json(c.weights)},
          {"factor", factor},
          {"matrix", matrix},
          {"function", function},
          {"x", c.x},
          {"quadrature_points", c.quadrature_points},
          {"output_dir", c.output_dir},
          {"emit", c.emit},
          {"thresholds", to_json(c.thresholds)},
          {"seed", c.seed}};
}

/// Parses and validates a config. Relative file paths resolve against
/// `base_dir`.
inline ExperimentConfig config_from_json(const json& j,
                                         const std::filesystem::path& base_dir = {}) {
  static const std::vector<std::string> known{
      "name", "N",      "k",    "weights", "factor",     "matrix", "function",
      "x",    "quadrature_points", "output_dir", "emit", "thresholds", "seed"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    c.N = j.value("N", c.N);
    if (j.contains("k")) {
      c.k = j["k"].is_array() ? j["k"].get<std::vector<double>>()
                              : std::vector<double>{j["k"].get<double>()};
    }
    if (j.contains("weights")) c.weights = sequence_spec_from_json(j["weights"], "weights");
    if (j.contains("factor")) {
      const auto& f = j["factor"];
      c.factor.profile = f.value("profile", std::string{});
      if (c.factor.profile.empty()) {
        c.factor.lambda = sequence_spec_from_json(f.at("lambda"), "factor.lambda");
        c.factor.companion = sequence_spec_from_json(f.at("companion"), "factor.companion");
        c.factor.delta = sequence_spec_from_json(f.at("delta"), "factor.delta");
      }
    }
    if (j.contains("matrix")) {
      c.matrix.file = j["matrix"].value("file", std::string{});
      c.matrix.factory = c.matrix.file.empty() ? j["matrix"].value("factory", c.matrix.factory)
                                               : std::string{};
    }
    if (j.contains("function")) {
      c.function.table = j["function"].value("table", std::string{});
      c.function.name = c.function.table.empty() ? j["function"].value("name", c.function.name)
                                                 : std::string{};
    }
    c.x = j.value("x", c.x);
    c.quadrature_points = j.value("quadrature_points", c.quadrature_points);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.emit = j.value("emit", c.emit);
    if (j.contains("thresholds")) c.thresholds = thresholds_from_json(j["thresholds"]);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (c.N < 16) throw ConfigError("config: N must be at least 16");
  if (c.k.empty()) throw ConfigError("config: k must list at least one exponent");
  for (double k : c.k) {
    if (!(k >= 1.0)) throw ConfigError("config: every k must be >= 1");
  }
  if (c.emit != "json" && c.emit != "csv" && c.emit != "both") {
    throw ConfigError("config: emit must be json, csv or both");
  }
  if (c.factor.profile != "" && c.factor.profile != "canonical") {
    throw ConfigError("config: unknown factor profile '" + c.factor.profile + "'");
  }
  if (c.matrix.file.empty() && c.matrix.factory != "identity" &&
      c.matrix.factory != "weighted_mean" && c.matrix.factory != "cesaro1") {
    throw ConfigError("config: unknown matrix factory '" + c.matrix.factory + "'");
  }
  auto resolve = [&](std::string& file) {
    if (file.empty()) return;
    std::filesystem::path p(file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError("config: file not found: " + p.string());
    file = p.string();
  };
  resolve(c.weights.file);
  resolve(c.factor.lambda.file);
  resolve(c.factor.companion.file);
  resolve(c.factor.delta.file);
  resolve(c.matrix.file);
  resolve(c.function.table);
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j, path.parent_path());
}

// ---- canned scenarios ---------------------------------------------------------

inline std::vector<std::string> scenario_names() {
  return {"bor-weighted-mean", "negative-constant-lambda", "zero-series"};
}

inline ExperimentConfig scenario(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.N = 10000;
  c.k = {1.0, 2.0};
  c.x = std::numbers::pi / 2;
  if (name == "bor-weighted-mean") return c;
  if (name == "negative-constant-lambda") {
    // geometric weights make X_n grow linearly, so λ_n = 1 breaks |λ_n| X_n = O(1)
    c.weights = {.generator = "geometric:1.01"};
    c.factor = {.profile = "",
                .lambda = {.generator = "ones"},
                .companion = {.generator = "cushion"},
                .delta = {.generator = "cushion-delta"}};
    return c;
  }
  if (name == "zero-series") {
    c.function = {.name = "zero"};
    return c;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

// ---- factor profiles ------------------------------------------------------------

/// λ_n = 1/X_n^2, A_n = |Δλ_n| + 1/(n^2 X_n), δ_n = max(0, -ΔA_n) + 1/(n^3 X_n),
/// for n = 1..N. Needs X_1..X_{N+2}.
inline FactorProfile canonical_profile(const WeightSystem& w, std::size_t N) {
  if (w.X.size() < N + 2) {
    throw InvalidInput("canonical_profile needs X_1..X_" + std::to_string(N + 2));
  }
  auto lambda = [&](Index n) { return 1.0 / (w.X[n] * w.X[n]); };
  auto companion = [&](Index n) {
    const double nd = static_cast<double>(n);
    return std::abs(lambda(n) - lambda(n + 1)) + 1.0 / (nd * nd * w.X[n]);
  };
  std::vector<double> l(N), a(N), d(N);
  for (Index n = 1; n <= static_cast<Index>(N); ++n) {
    const double nd = static_cast<double>(n);
    const auto i = static_cast<std::size_t>(n - 1);
    l[i] = lambda(n);
    a[i] = companion(n);
    d[i] = std::max(0.0, -(companion(n) - companion(n + 1))) + 1.0 / (nd * nd * nd * w.X[n]);
  }
  return make_factor_profile(SequencePrefix(std::move(l), IndexBase::one),
                             SequencePrefix(std::move(a), IndexBase::one),
                             SequencePrefix(std::move(d), IndexBase::one));
}

// ---- pipeline -------------------------------------------------------------------

using MatrixOperator = std::variant<NormalMatrix, IdentityMatrix, CesaroOneMatrix, WeightedMeanMatrix>;

struct ExperimentResult {
  std::vector<CheckReport> hypotheses;
  std::vector<CheckReport> lemma;
  std::vector<CheckReport> conclusions;
  std::vector<AbsoluteIndexTrace> traces;
  std::vector<BoundednessVerdict> verdicts;
  bool lemma_consistent = true;
  bool theorem_consistent = true;
  bool fourier_consistent = true;
  bool conclusion_computed = false;
  std::vector<std::string> broken_hypotheses;
  double fourier_error_estimate = 0.0;
  int exit_code = 0;

  std::vector<CheckReport> all_reports() const {
    std::vector<CheckReport> out = hypotheses;
    out.insert(out.end(), lemma.begin(), lemma.end());
    out.insert(out.end(), conclusions.begin(), conclusions.end());
    return out;
  }
};

namespace detail {

inline std::string k_label(double k) {
  std::string s = format_double(k);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

inline SequencePrefix materialize(const SequenceSpec& spec, std::size_t length, IndexBase base,
                                  std::uint64_t seed, const WeightSystem* w = nullptr) {
  if (!spec.values.empty() || !spec.file.empty()) {
    SequencePrefix s = spec.file.empty() ? SequencePrefix(spec.values, base)
                                         : load_sequence(spec.file, base);
    if (s.size() < length) {
      throw ConfigError("sequence has " + std::to_string(s.size()) + " entries, need " +
                        std::to_string(length));
    }
    return SequencePrefix(std::vector<double>(s.data().begin(),
                                              s.data().begin() + static_cast<std::ptrdiff_t>(length)),
                          base);
  }
  const std::string& g = spec.generator;
  if (g.rfind("uniform:", 0) == 0) {
    const auto bounds = detail::parse_number_list(g.substr(8), g);
    if (bounds.size() != 2 || !(bounds[0] < bounds[1])) {
      throw ConfigError("uniform generator needs 'uniform:lo,hi' with lo < hi");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(bounds[0], bounds[1]);
    std::vector<double> v(length);
    for (auto& x : v) x = dist(rng);
    return SequencePrefix(std::move(v), base);
  }
  // 1/(n^2 X_n) and 1/(n^3 X_n): positive cushions that decay fast enough for
  // the convergence hypotheses.
  if (g == "cushion" || g == "cushion-delta") {
    if (w == nullptr || w->X.size() < length) throw ConfigError(g + " needs X_1..X_N");
    const double power = g == "cushion" ? 2.0 : 3.0;
    return SequencePrefix::generate(
        [&](Index n) { return 1.0 / (std::pow(static_cast<double>(n), power) * w->X[n]); }, length,
        IndexBase::one);
  }
  try {
    return SequencePrefix::generate(named_generator(g), length, base);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

inline MatrixOperator build_matrix(const ExperimentConfig& c, const WeightSystem& w,
                                   std::size_t dim) {
  if (!c.matrix.file.empty()) {
    NormalMatrix m;
    try {
      m = load_matrix(c.matrix.file);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    if (m.dim() < dim) {
      throw ConfigError("matrix file has " + std::to_string(m.dim()) + " rows, need " +
                        std::to_string(dim));
    }
    if (m.dim() == dim) return m;
    std::vector<std::vector<double>> rows = m.rows();
    rows.resize(dim);
    return NormalMatrix::from_rows(rows);
  }
  if (c.matrix.factory == "identity") return IdentityMatrix{dim};
  if (c.matrix.factory == "cesaro1") return CesaroOneMatrix{dim};
  return WeightedMeanMatrix(w, dim);
}

inline PeriodicFunction build_function(const ExperimentConfig& c) {
  try {
    if (!c.function.table.empty()) return load_tabulated_function(c.function.table);
    return named_function(c.function.name);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

inline bool premises_hold(const std::vector<CheckReport>& hyps) {
  return std::none_of(hyps.begin(), hyps.end(), [](const CheckReport& r) { return r.failed(); });
}

}  // namespace detail

/// Theorem pipeline: builds the inputs, checks every hypothesis and the
/// lemma conclusions, evaluates the |A, p_n|_k trace of Σ C_n(x) λ_n when no
/// hypothesis failed, and decides whether the verdicts are consistent.
inline ExperimentResult run_theorem_experiment(const ExperimentConfig& c) {
  const std::size_t N = c.N;
  const Thresholds& thr = c.thresholds;
  ExperimentResult res;

  // Weights cover n = 0..N+2 so the canonical profile can take two forward
  // differences at n = N.
  const SequencePrefix p = detail::materialize(c.weights, N + 3, IndexBase::zero, c.seed);
  const WeightSystem w = build_weight_system(p);

  FactorProfile fp;
  if (c.factor.profile == "canonical") {
    fp = canonical_profile(w, N);
  } else {
    fp = make_factor_profile(
        detail::materialize(c.factor.lambda, N, IndexBase::one, c.seed, &w),
        detail::materialize(c.factor.companion, N, IndexBase::one, c.seed + 1, &w),
        detail::materialize(c.factor.delta, N, IndexBase::one, c.seed + 2, &w));
  }

  const MatrixOperator A = detail::build_matrix(c, w, N + 1);
  const PeriodicFunction f = detail::build_function(c);
  const std::size_t quad =
      c.quadrature_points > 0 ? c.quadrature_points : std::max<std::size_t>(8192, 8 * N);
  const FourierCoefficients coeffs = fourier_coefficients(f, N, quad);
  res.fourier_error_estimate = coeffs.error_estimate;
  const FourierData data = fourier_terms(coeffs, c.x);

  // Series Σ C_n(x) (for the t_n condition) and Σ C_n(x) λ_n, both with a_0 = 0.
  std::vector<double> base_terms(N + 1, 0.0), factored(N + 1, 0.0);
  for (Index n = 1; n <= static_cast<Index>(N); ++n) {
    base_terms[static_cast<std::size_t>(n)] = data.C[n];
    factored[static_cast<std::size_t>(n)] = data.C[n] * fp.lambda[n];
  }
  const SequencePrefix series(std::move(base_terms));
  const SequencePrefix factored_series(std::move(factored));

  // Hypotheses.
  std::vector<CheckReport> lemma_premises;
  lemma_premises.push_back(check_Pn_O_npn(w, thr));
  for (auto& r : check_factor_hypotheses(fp, w, thr)) lemma_premises.push_back(std::move(r));
  for (double k : c.k) {
    CheckReport r = check_tn_condition(series, w, k, thr);
    r.id += "_k" + detail::k_label(k);
    lemma_premises.push_back(std::move(r));
  }
  res.hypotheses = lemma_premises;
  for (auto& r : std::visit([&](const auto& m) { return check_matrix_conditions(m, w, thr); }, A)) {
    res.hypotheses.push_back(std::move(r));
  }
  const PeriodicFunction phi_fn = phi(f, c.x);
  CheckReport phi_bv = bv_report("phi_bv", bv_profile(phi_fn, 0.0, std::numbers::pi, 64, 8192, thr), thr);
  CheckReport phi1_bv = bv_report("phi1_bv",
                                  bv_profile(phi_one(phi_fn), 0.0, std::numbers::pi, 64, 8192, thr), thr);
  res.hypotheses.push_back(phi1_bv);
  res.hypotheses.push_back(phi_bv);

  // Lemma conclusions.
  res.lemma = check_lemma3(fp, w, thr);

  // Fourier z_n bound: max |z_n| over n <= N against n <= N/2.
  {
    const SequencePrefix z = z_mean(data.C);
    double full = 0.0;
    double half = 0.0;
    for (Index n = 1; n < z.end_index(); ++n) {
      full = std::max(full, std::abs(z[n]));
      if (n <= static_cast<Index>(N / 2)) half = std::max(half, std::abs(z[n]));
    }
    CheckReport r;
    r.id = "fourier_z_bounded";
    r.kind = CheckKind::asymptotic;
    r.bounding_constant = full;
    r.thresholds = {{"ratio_low", 0.9}, {"ratio_high", 1.1}};
    const bool stable = full == 0.0 || (half > 0.0 && full / half >= 0.9 && full / half <= 1.1);
    r.verdict = stable ? Verdict::pass : Verdict::fail;
    r.notes.push_back("max |z_n| up to N/2: " + std::to_string(half) + ", up to N: " +
                      std::to_string(full));
    if (!stable) r.first_violation = static_cast<Index>(N / 2) + 1;
    res.conclusions.push_back(std::move(r));
  }

  for (const auto& r : res.hypotheses) {
    if (r.failed()) res.broken_hypotheses.push_back(r.id);
  }

  // Theorem conclusion.
  std::vector<CheckReport> theorem;
  if (detail::premises_hold(res.hypotheses)) {
    res.conclusion_computed = true;
    const MatrixTransformResult tr =
        std::visit([&](const auto& m) { return apply_series_form(m, factored_series); }, A);
    for (double k : c.k) {
      AbsoluteIndexTrace trace = matrix_index_from_differences(tr.dAn, w, k);
      res.verdicts.push_back(assess_boundedness(trace, thr));
      CheckReport r = boundedness_report("theorem_conclusion_k" + detail::k_label(k), trace, thr);
      r.thresholds["k"] = k;
      theorem.push_back(r);
      res.traces.push_back(std::move(trace));
    }
  }
  res.conclusions.insert(res.conclusions.end(), theorem.begin(), theorem.end());

  res.lemma_consistent = implication_holds(lemma_premises, res.lemma);
  res.theorem_consistent =
      !detail::premises_hold(res.hypotheses) ||
      std::none_of(theorem.begin(), theorem.end(), [](const CheckReport& r) { return r.failed(); });
  res.fourier_consistent = implication_holds({phi_bv}, {res.conclusions.front()});
  res.exit_code =
      res.lemma_consistent && res.theorem_consistent && res.fourier_consistent ? 0 : 1;
  return res;
}

inline std::string summary_table(const ExperimentResult& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-36s %-13s %-24s %s\n", "check", "verdict", "constant",
                "first_violation");
  out += line;
  for (const auto& rep : r.all_reports()) {
    std::string fv = "-";
    if (rep.first_violation) {
      fv = std::to_string(*rep.first_violation);
      if (rep.violation_column) fv = "(" + fv + ", " + std::to_string(*rep.violation_column) + ")";
    }
    std::snprintf(line, sizeof line, "%-36s %-13s %-24s %s\n", rep.id.c_str(),
                  to_string(rep.verdict),
                  rep.bounding_constant ? format_double(*rep.bounding_constant).c_str() : "-",
                  fv.c_str());
    out += line;
  }
  out += "lemma consistency:   " + std::string(r.lemma_consistent ? "ok" : "VIOLATED") + "\n";
  out += "theorem consistency: " + std::string(r.theorem_consistent ? "ok" : "VIOLATED") + "\n";
  out += "fourier consistency: " + std::string(r.fourier_consistent ? "ok" : "VIOLATED") + "\n";
  if (!r.broken_hypotheses.empty()) {
    out += "broken hypotheses:";
    for (const auto& id : r.broken_hypotheses) out += " " + id;
    out += "\n";
  }
  if (!r.conclusion_computed) out += "theorem conclusion not evaluated (a hypothesis failed)\n";
  return out;
}

inline std::filesystem::path output_directory(const ExperimentConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("SUMMATRIX_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / c.name;
  }
  return std::filesystem::path("summatrix_out") / c.name;
}

/// Writes suite.json, summary.txt and per-k traces (CSV and/or JSON). Data
/// files carry no timestamps.
inline void write_experiment_outputs(const ExperimentConfig& c, const ExperimentResult& r,
                                     const std::filesystem::path& dir) {
  write_text(dir / "suite.json", to_json(r.all_reports()).dump(2) + "\n");
  write_text(dir / "summary.txt", summary_table(r));
  for (const auto& t : r.traces) {
    const std::string stem = "trace_k" + detail::k_label(t.k);
    if (c.emit != "json") emit_trace(t, dir / (stem + ".csv"));
    if (c.emit != "csv") write_text(dir / (stem + ".json"), to_json(t).dump() + "\n");
  }
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  write_text(dir / "verdicts.json", verdicts.dump(2) + "\n");
}

}  // namespace summatrix

#endif  // SUMMATRIX_EXPERIMENT_HPP

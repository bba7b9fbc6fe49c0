// summatrix command-line front end.
//
//   summatrix means      --series harmonic --N 200 --alpha 1 --k 1,2
//   summatrix matrix     --matrix weighted_mean --series alternating --N 500
//   summatrix fourier    --function sawtooth --x 1.5707963 --N 256
//   summatrix check      --scenario bor-weighted-mean
//   summatrix experiment --scenario bor-weighted-mean --out results/
//
// Exit codes: 0 success / consistent verdicts, 1 hypotheses and conclusions
// disagree, 2 configuration error, 3 runtime or numeric error.

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "summatrix/summatrix.hpp"

namespace sm = summatrix;
using sm::json;

namespace {

struct CommonOptions {
  std::string config;
  std::string emit;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Seed for randomized generators");
}

json load_json_config(const std::string& path) {
  if (path.empty()) return json::object();
  try {
    return json::parse(sm::read_text(path));
  } catch (const json::exception& e) {
    throw sm::ConfigError(path + ": " + e.what());
  } catch (const sm::IoError& e) {
    throw sm::ConfigError(e.what());
  }
}

// "file:path", "values:1,2,3" or a generator key.
sm::SequenceSpec parse_sequence_arg(const std::string& arg) {
  if (arg.rfind("file:", 0) == 0) return {.file = arg.substr(5)};
  if (arg.rfind("values:", 0) == 0) {
    return {.values = sm::detail::parse_number_list(arg.substr(7), arg)};
  }
  return {.generator = arg};
}

sm::SequenceSpec sequence_from(const json& cfg, const std::string& key, const std::string& flag,
                               const std::string& fallback) {
  if (!flag.empty()) return parse_sequence_arg(flag);
  if (cfg.contains(key)) return sm::sequence_spec_from_json(cfg[key], key);
  return {.generator = fallback};
}

template <class T>
T setting(const json& cfg, const std::string& key, const std::optional<T>& flag, T fallback) {
  if (flag) return *flag;
  try {
    return cfg.value(key, fallback);
  } catch (const json::exception& e) {
    throw sm::ConfigError(key + ": " + e.what());
  }
}

std::vector<double> exponents(const json& cfg, const std::vector<double>& flag) {
  std::vector<double> k = flag;
  if (k.empty()) {
    if (cfg.contains("k")) {
      k = cfg["k"].is_array() ? cfg["k"].get<std::vector<double>>()
                              : std::vector<double>{cfg["k"].get<double>()};
    } else {
      k = {1.0};
    }
  }
  for (double v : k) {
    if (!(v >= 1.0)) throw sm::ConfigError("every k must be >= 1");
  }
  return k;
}

std::filesystem::path out_dir(const CommonOptions& o, const json& cfg, const std::string& name) {
  if (!o.out.empty()) return o.out;
  if (cfg.contains("output_dir")) return cfg["output_dir"].get<std::string>();
  sm::ExperimentConfig c;
  c.name = name;
  return sm::output_directory(c);
}

std::string emit_mode(const CommonOptions& o, const json& cfg) {
  const std::string e = !o.emit.empty() ? o.emit : cfg.value("emit", std::string("both"));
  if (e != "json" && e != "csv" && e != "both") throw sm::ConfigError("emit must be json, csv or both");
  return e;
}

void write_traces(const std::vector<sm::AbsoluteIndexTrace>& traces, const std::string& prefix,
                  const std::filesystem::path& dir, const std::string& emit, json& doc) {
  for (const auto& t : traces) {
    const std::string stem = prefix + "_k" + sm::detail::k_label(t.k);
    if (emit != "json") sm::emit_trace(t, dir / (stem + ".csv"));
    json entry = sm::to_json(t);
    entry["boundedness"] = sm::to_json(sm::assess_boundedness(t));
    doc[stem] = std::move(entry);
  }
}

void write_run_metadata(const std::filesystem::path& dir, const std::string& command,
                        const json& config) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  sm::write_text(dir / "run_meta.json",
                 json{{"command", command}, {"timestamp", stamp}, {"config", config}}.dump(2) + "\n");
}

// ---- means ------------------------------------------------------------------

struct MeansOptions {
  std::string series, weights;
  std::optional<std::size_t> N;
  std::optional<double> alpha;
  std::vector<double> k;
};

int run_means(const CommonOptions& o, const MeansOptions& m) {
  const json cfg = load_json_config(o.config);
  const std::size_t N = setting<std::size_t>(cfg, "N", m.N, 200);
  const double alpha = setting<double>(cfg, "alpha", m.alpha, 1.0);
  const auto k = exponents(cfg, m.k);
  const std::uint64_t seed = setting<std::uint64_t>(cfg, "seed", o.seed, 0);
  const auto series_spec = sequence_from(cfg, "series", m.series, "alternating");
  const auto weight_spec = sequence_from(cfg, "weights", m.weights, "ones");

  const auto a = sm::detail::materialize(series_spec, N, sm::IndexBase::zero, seed);
  const auto w = sm::build_weight_system(
      sm::detail::materialize(weight_spec, N, sm::IndexBase::zero, seed + 1));
  const auto means = sm::cesaro_means(a, alpha);
  const auto riesz = sm::riesz_mean(sm::partial_sums(a), w);

  std::vector<sm::AbsoluteIndexTrace> cesaro, rz;
  for (double kk : k) {
    cesaro.push_back(sm::cesaro_index(a, alpha, kk));
    rz.push_back(sm::riesz_index(a, w, kk));
  }
  const auto dir = out_dir(o, cfg, "means");
  const std::string emit = emit_mode(o, cfg);
  json doc = {{"alpha", alpha},
              {"u", sm::to_json(means.u)},
              {"t", sm::to_json(means.t)},
              {"riesz", sm::to_json(riesz)}};
  write_traces(cesaro, "cesaro", dir, emit, doc);
  write_traces(rz, "riesz", dir, emit, doc);
  if (emit != "csv") sm::write_text(dir / "means.json", doc.dump(2) + "\n");
  write_run_metadata(dir, "means", cfg);
  std::cout << "means: N = " << N << ", alpha = " << alpha << ", outputs in " << dir.string()
            << "\n";
  for (std::size_t i = 0; i < k.size(); ++i) {
    std::cout << "  k = " << k[i] << ": |C,alpha|_k partial sum "
              << sm::format_double(cesaro[i].cumulative.data().back()) << ", |N,p|_k partial sum "
              << sm::format_double(rz[i].cumulative.data().back()) << "\n";
  }
  return 0;
}

// ---- matrix -----------------------------------------------------------------

struct MatrixOptions {
  std::string matrix, series, weights;
  std::optional<std::size_t> N;
  std::vector<double> k;
};

int run_matrix(const CommonOptions& o, const MatrixOptions& m) {
  const json cfg = load_json_config(o.config);
  const std::size_t N = setting<std::size_t>(cfg, "N", m.N, 200);
  const auto k = exponents(cfg, m.k);
  const std::uint64_t seed = setting<std::uint64_t>(cfg, "seed", o.seed, 0);
  const auto series_spec = sequence_from(cfg, "series", m.series, "alternating");
  const auto weight_spec = sequence_from(cfg, "weights", m.weights, "ones");

  sm::ExperimentConfig ec;
  const std::string matrix_arg =
      !m.matrix.empty() ? m.matrix : cfg.value("matrix", std::string("weighted_mean"));
  if (matrix_arg.rfind("file:", 0) == 0) {
    ec.matrix = {.factory = "", .file = matrix_arg.substr(5)};
  } else {
    ec.matrix = {.factory = matrix_arg};
    if (matrix_arg != "identity" && matrix_arg != "weighted_mean" && matrix_arg != "cesaro1") {
      throw sm::ConfigError("unknown matrix factory '" + matrix_arg + "'");
    }
  }
  const auto a = sm::detail::materialize(series_spec, N, sm::IndexBase::zero, seed);
  const auto w = sm::build_weight_system(
      sm::detail::materialize(weight_spec, N, sm::IndexBase::zero, seed + 1));
  const sm::MatrixOperator A = sm::detail::build_matrix(ec, w, N);

  const auto tr = std::visit([&](const auto& mat) { return sm::apply_series_form(mat, a); }, A);
  std::vector<sm::AbsoluteIndexTrace> traces;
  for (double kk : k) traces.push_back(sm::matrix_index_from_differences(tr.dAn, w, kk));

  const auto dir = out_dir(o, cfg, "matrix");
  const std::string emit = emit_mode(o, cfg);
  json doc = {{"An", sm::to_json(tr.An)}, {"dAn", sm::to_json(tr.dAn)}};
  if (N <= 200) {
    const auto assoc = std::visit([](const auto& mat) { return sm::associate(mat); }, A);
    auto rows = [](const sm::PackedTriangle& t) {
      std::vector<std::vector<double>> out(t.dim());
      for (std::size_t n = 0; n < t.dim(); ++n) {
        auto r = t.row(static_cast<sm::Index>(n));
        out[n].assign(r.begin(), r.end());
      }
      return out;
    };
    doc["abar"] = {{"n", N}, {"rows", rows(assoc.abar)}};
    doc["ahat"] = {{"n", N}, {"rows", rows(assoc.ahat)}};
  }
  write_traces(traces, "matrix", dir, emit, doc);
  if (emit != "csv") sm::write_text(dir / "matrix.json", doc.dump(2) + "\n");
  write_run_metadata(dir, "matrix", cfg);
  std::cout << "matrix: N = " << N << ", outputs in " << dir.string() << "\n";
  for (const auto& t : traces) {
    std::cout << "  k = " << t.k << ": |A,p|_k partial sum "
              << sm::format_double(t.cumulative.data().back()) << "\n";
  }
  return 0;
}

// ---- fourier ----------------------------------------------------------------

struct FourierOptions {
  std::string function;
  std::optional<double> x;
  std::optional<std::size_t> N, quad;
};

int run_fourier(const CommonOptions& o, const FourierOptions& fo) {
  const json cfg = load_json_config(o.config);
  const std::size_t N = setting<std::size_t>(cfg, "N", fo.N, 256);
  const double x = setting<double>(cfg, "x", fo.x, std::numbers::pi / 2);
  const std::size_t quad =
      setting<std::size_t>(cfg, "quadrature_points", fo.quad, std::max<std::size_t>(8192, 8 * N));
  const std::string fn = !fo.function.empty() ? fo.function
                                              : cfg.value("function", std::string("sawtooth"));
  sm::ExperimentConfig ec;
  if (fn.rfind("table:", 0) == 0) {
    ec.function = {.name = "", .table = fn.substr(6)};
  } else {
    ec.function = {.name = fn};
  }
  const sm::PeriodicFunction f = sm::detail::build_function(ec);
  const auto coeffs = sm::fourier_coefficients(f, N, quad);
  const auto data = sm::fourier_terms(coeffs, x);
  const auto z = sm::z_mean(data.C);
  const auto phi_fn = sm::phi(f, x);
  const auto phi_prof = sm::bv_profile(phi_fn, 0.0, std::numbers::pi);
  const auto phi1_prof = sm::bv_profile(sm::phi_one(phi_fn), 0.0, std::numbers::pi);

  const auto dir = out_dir(o, cfg, "fourier");
  const std::string emit = emit_mode(o, cfg);
  if (emit != "json") {
    std::string csv = "n,a,b,C,z\n";
    for (sm::Index n = 1; n <= static_cast<sm::Index>(N); ++n) {
      csv += std::to_string(n) + "," + sm::format_double(data.a[n]) + "," +
             sm::format_double(data.b[n]) + "," + sm::format_double(data.C[n]) + "," +
             sm::format_double(z[n]) + "\n";
    }
    sm::write_text(dir / "fourier.csv", csv);
  }
  if (emit != "csv") {
    auto profile = [](const sm::BvProfile& p) {
      return json{{"grids", p.grids}, {"variations", p.variations}, {"stabilized", p.stabilized}};
    };
    json doc = {{"function", f.description()},
                {"x", x},
                {"quadrature_points", quad},
                {"a0", coeffs.a0},
                {"error_estimate", coeffs.error_estimate},
                {"a", sm::to_json(data.a)},
                {"b", sm::to_json(data.b)},
                {"C", sm::to_json(data.C)},
                {"z", sm::to_json(z)},
                {"phi_bv", profile(phi_prof)},
                {"phi1_bv", profile(phi1_prof)}};
    sm::write_text(dir / "fourier.json", doc.dump(2) + "\n");
  }
  write_run_metadata(dir, "fourier", cfg);
  double zmax = 0.0;
  for (double v : z) zmax = std::max(zmax, std::abs(v));
  std::cout << "fourier: " << f.description() << ", N = " << N << ", x = " << x
            << ", quadrature error estimate " << coeffs.error_estimate << "\n"
            << "  max |z_n| = " << zmax << ", phi variation " << phi_prof.variations.back()
            << (phi_prof.stabilized ? " (stable)" : " (growing)") << ", phi_1 variation "
            << phi1_prof.variations.back() << (phi1_prof.stabilized ? " (stable)" : " (growing)")
            << "\nOutputs in " << dir.string() << "\n";
  return 0;
}

// ---- check / experiment -------------------------------------------------------

struct ExperimentOptions {
  std::string scenario;
  std::optional<std::size_t> N;
  std::vector<double> k;
};

sm::ExperimentConfig experiment_config(const CommonOptions& o, const ExperimentOptions& e) {
  if (!e.scenario.empty() && !o.config.empty()) {
    throw sm::ConfigError("give either --scenario or --config, not both");
  }
  sm::ExperimentConfig c = !o.config.empty() ? sm::load_config(o.config)
                           : !e.scenario.empty() ? sm::scenario(e.scenario)
                                                 : sm::scenario("bor-weighted-mean");
  if (e.N) {
    if (*e.N < 16) throw sm::ConfigError("N must be at least 16");
    c.N = *e.N;
  }
  if (!e.k.empty()) {
    for (double v : e.k) {
      if (!(v >= 1.0)) throw sm::ConfigError("every k must be >= 1");
    }
    c.k = e.k;
  }
  if (!o.emit.empty()) c.emit = o.emit;
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  return c;
}

int run_check(const CommonOptions& o, const ExperimentOptions& e) {
  const sm::ExperimentConfig c = experiment_config(o, e);
  const auto p = sm::detail::materialize(c.weights, c.N + 3, sm::IndexBase::zero, c.seed);
  const auto w = sm::build_weight_system(p);
  const sm::FactorProfile fp =
      c.factor.profile == "canonical"
          ? sm::canonical_profile(w, c.N)
          : sm::make_factor_profile(
                sm::detail::materialize(c.factor.lambda, c.N, sm::IndexBase::one, c.seed, &w),
                sm::detail::materialize(c.factor.companion, c.N, sm::IndexBase::one, c.seed + 1, &w),
                sm::detail::materialize(c.factor.delta, c.N, sm::IndexBase::one, c.seed + 2, &w));
  const sm::MatrixOperator A = sm::detail::build_matrix(c, w, c.N + 1);

  std::vector<sm::CheckReport> premises{sm::check_Pn_O_npn(w, c.thresholds)};
  for (auto& r : sm::check_factor_hypotheses(fp, w, c.thresholds)) premises.push_back(std::move(r));
  auto matrix = std::visit([&](const auto& m) { return sm::check_matrix_conditions(m, w, c.thresholds); }, A);
  const auto lemma = sm::check_lemma3(fp, w, c.thresholds);
  const bool consistent = sm::implication_holds(premises, lemma);

  std::vector<sm::CheckReport> all = premises;
  all.insert(all.end(), matrix.begin(), matrix.end());
  all.insert(all.end(), lemma.begin(), lemma.end());
  sm::ExperimentResult shown;
  shown.hypotheses = all;
  shown.lemma_consistent = consistent;
  shown.conclusion_computed = true;
  const auto dir = sm::output_directory(c);
  sm::write_text(dir / "checks.json", sm::to_json(all).dump(2) + "\n");
  write_run_metadata(dir, "check", sm::to_json(c));
  std::string table = sm::summary_table(shown);
  // theorem/fourier lines are meaningless without the conclusion stage
  table = table.substr(0, table.find("theorem consistency"));
  std::cout << table << "Suite written to " << (dir / "checks.json").string() << "\n";
  return consistent ? 0 : 1;
}

int run_experiment(const CommonOptions& o, const ExperimentOptions& e) {
  const sm::ExperimentConfig c = experiment_config(o, e);
  const auto start = std::chrono::steady_clock::now();
  const sm::ExperimentResult r = sm::run_theorem_experiment(c);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto dir = sm::output_directory(c);
  sm::write_experiment_outputs(c, r, dir);
  json meta_cfg = sm::to_json(c);
  meta_cfg["runtime_seconds"] = seconds;
  meta_cfg["fourier_error_estimate"] = r.fourier_error_estimate;
  write_run_metadata(dir, "experiment", meta_cfg);
  std::cout << "experiment '" << c.name << "' (N = " << c.N << ")\n"
            << sm::summary_table(r) << "Outputs in " << dir.string() << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"summatrix: summability methods and theorem-hypothesis checks"};
  app.require_subcommand(1);

  CommonOptions common;
  MeansOptions means;
  auto* cmd_means = app.add_subcommand("means", "Cesaro and Riesz means and their absolute indices");
  add_common(cmd_means, common);
  cmd_means->add_option("--series", means.series, "Series terms a_n (generator, file:, values:)");
  cmd_means->add_option("--weights", means.weights, "Weights p_n");
  cmd_means->add_option("--N", means.N, "Prefix length");
  cmd_means->add_option("--alpha", means.alpha, "Cesaro order (> -1)");
  cmd_means->add_option("--k", means.k, "Exponents k >= 1")->delimiter(',');

  MatrixOptions mat;
  auto* cmd_matrix = app.add_subcommand("matrix", "Normal-matrix transform and |A,p_n|_k index");
  add_common(cmd_matrix, common);
  cmd_matrix->add_option("--matrix", mat.matrix, "identity | weighted_mean | cesaro1 | file:<json>");
  cmd_matrix->add_option("--series", mat.series, "Series terms a_n");
  cmd_matrix->add_option("--weights", mat.weights, "Weights p_n");
  cmd_matrix->add_option("--N", mat.N, "Matrix dimension");
  cmd_matrix->add_option("--k", mat.k, "Exponents k >= 1")->delimiter(',');

  FourierOptions four;
  auto* cmd_fourier = app.add_subcommand("fourier", "Fourier coefficients, C_n(x), z_n(x), BV profiles");
  add_common(cmd_fourier, common);
  cmd_fourier->add_option("--function", four.function, "Built-in function key or table:<csv>");
  cmd_fourier->add_option("--x", four.x, "Evaluation point");
  cmd_fourier->add_option("--N", four.N, "Number of coefficients");
  cmd_fourier->add_option("--quad", four.quad, "Quadrature intervals (>= 8N)");

  ExperimentOptions check_opts;
  auto* cmd_check = app.add_subcommand("check", "Hypothesis and lemma checks");
  add_common(cmd_check, common);
  cmd_check->add_option("--scenario", check_opts.scenario, "Canned scenario");
  cmd_check->add_option("--N", check_opts.N, "Prefix length");

  ExperimentOptions exp_opts;
  auto* cmd_exp = app.add_subcommand("experiment", "Full theorem-verification pipeline");
  add_common(cmd_exp, common);
  cmd_exp->add_option("--scenario", exp_opts.scenario, "Canned scenario")
      ->check(CLI::IsMember(sm::scenario_names()));
  cmd_exp->add_option("--N", exp_opts.N, "Prefix length");
  cmd_exp->add_option("--k", exp_opts.k, "Exponents k >= 1")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_means->parsed()) return run_means(common, means);
    if (cmd_matrix->parsed()) return run_matrix(common, mat);
    if (cmd_fourier->parsed()) return run_fourier(common, four);
    if (cmd_check->parsed()) return run_check(common, check_opts);
    if (cmd_exp->parsed()) return run_experiment(common, exp_opts);
  } catch (const sm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

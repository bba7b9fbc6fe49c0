#ifndef SUMMATRIX_IO_HPP
#define SUMMATRIX_IO_HPP

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "summatrix/fourier.hpp"
#include "summatrix/indices.hpp"
#include "summatrix/matrix.hpp"
#include "summatrix/report.hpp"
#include "summatrix/types.hpp"

namespace summatrix {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: enough to reproduce any double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

// ---- reports ---------------------------------------------------------------

inline json to_json(const CheckReport& r) {
  json j;
  j["id"] = r.id;
  j["verdict"] = to_string(r.verdict);
  j["kind"] = to_string(r.kind);
  if (r.bounding_constant) j["constant"] = *r.bounding_constant;
  if (r.first_violation) {
    if (r.violation_column) {
      j["first_violation"] = {*r.first_violation, *r.violation_column};
    } else {
      j["first_violation"] = *r.first_violation;
    }
  }
  j["thresholds"] = r.thresholds;
  j["notes"] = r.notes;
  return j;
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw InvalidInput("unknown verdict '" + s + "'");
}

inline CheckReport report_from_json(const json& j) {
  CheckReport r;
  r.id = j.at("id").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.kind = j.value("kind", std::string("asymptotic")) == "pointwise" ? CheckKind::pointwise
                                                                     : CheckKind::asymptotic;
  if (j.contains("constant")) r.bounding_constant = j["constant"].get<double>();
  if (j.contains("first_violation")) {
    const auto& fv = j["first_violation"];
    if (fv.is_array()) {
      r.first_violation = fv.at(0).get<Index>();
      r.violation_column = fv.at(1).get<Index>();
    } else {
      r.first_violation = fv.get<Index>();
    }
  }
  r.thresholds = j.value("thresholds", std::map<std::string, double>{});
  r.notes = j.value("notes", std::vector<std::string>{});
  return r;
}

inline json to_json(const std::vector<CheckReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

inline json to_json(const BoundednessVerdict& v) {
  return {{"bounded_estimate", v.bounded_estimate},
          {"tail_increment", v.tail_increment},
          {"fitted_growth_exponent", v.fitted_growth_exponent},
          {"prefix_length", v.prefix_length},
          {"thresholds",
           {{"tail_increment_limit", v.tail_threshold},
            {"growth_exponent_max", v.exponent_threshold}}}};
}

inline json to_json(const Thresholds& t) {
  return {{"stabilization_pass", t.stabilization_pass},
          {"stabilization_inconclusive", t.stabilization_inconclusive},
          {"tail_increment_fraction", t.tail_increment_fraction},
          {"tail_increment_floor", t.tail_increment_floor},
          {"growth_exponent_max", t.growth_exponent_max},
          {"positivity_tail_fraction", t.positivity_tail_fraction},
          {"decay_window_fraction", t.decay_window_fraction},
          {"decay_ratio", t.decay_ratio},
          {"equality_tolerance", t.equality_tolerance},
          {"monotone_slack", t.monotone_slack},
          {"bv_stabilization", t.bv_stabilization}};
}

/// Overrides only the keys present; unknown keys are rejected.
inline Thresholds thresholds_from_json(const json& j, Thresholds t = {}) {
  const std::map<std::string, double*> fields{
      {"stabilization_pass", &t.stabilization_pass},
      {"stabilization_inconclusive", &t.stabilization_inconclusive},
      {"tail_increment_fraction", &t.tail_increment_fraction},
      {"tail_increment_floor", &t.tail_increment_floor},
      {"growth_exponent_max", &t.growth_exponent_max},
      {"positivity_tail_fraction", &t.positivity_tail_fraction},
      {"decay_window_fraction", &t.decay_window_fraction},
      {"decay_ratio", &t.decay_ratio},
      {"equality_tolerance", &t.equality_tolerance},
      {"monotone_slack", &t.monotone_slack},
      {"bv_stabilization", &t.bv_stabilization}};
  for (const auto& [key, value] : j.items()) {
    auto it = fields.find(key);
    if (it == fields.end()) throw InvalidInput("unknown threshold '" + key + "'");
    *it->second = value.get<double>();
  }
  return t;
}

// ---- traces ----------------------------------------------------------------

inline json to_json(const AbsoluteIndexTrace& t) {
  return {{"method", to_string(t.method)},
          {"k", t.k},
          {"first_index", t.terms.first_index()},
          {"terms", t.terms.data()},
          {"cumulative", t.cumulative.data()}};
}

/// CSV with header "n,term,cumulative", full double precision.
inline std::string trace_csv(const AbsoluteIndexTrace& t) {
  std::string out = "n,term,cumulative\n";
  for (Index n = t.terms.first_index(); n < t.terms.end_index(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_double(t.terms[n]);
    out += ',';
    out += format_double(t.cumulative[n]);
    out += '\n';
  }
  return out;
}

inline void emit_trace(const AbsoluteIndexTrace& t, const std::filesystem::path& path) {
  write_text(path, trace_csv(t));
}

inline AbsoluteIndexTrace read_trace_csv(const std::filesystem::path& path,
                                         IndexMethod method = IndexMethod::series,
                                         double k = 1.0) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != "n,term,cumulative") {
    throw InvalidInput(path.string() + ": missing trace header");
  }
  std::vector<double> terms, cum;
  Index first = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string n, term, c;
    if (!std::getline(row, n, ',') || !std::getline(row, term, ',') || !std::getline(row, c)) {
      throw InvalidInput(path.string() + ": malformed row '" + line + "'");
    }
    if (terms.empty()) first = std::stoll(n);
    terms.push_back(std::stod(term));
    cum.push_back(std::stod(c));
  }
  const auto base = first == 0 ? IndexBase::zero : IndexBase::one;
  return {method, k, SequencePrefix(std::move(terms), base), SequencePrefix(std::move(cum), base)};
}

// ---- matrices --------------------------------------------------------------

/// { "n": N, "rows": [[a00], [a10, a11], ...] }
inline json to_json(const NormalMatrix& m) {
  return {{"n", m.dim()}, {"rows", m.rows()}};
}

inline NormalMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
  if (j.contains("n") && j["n"].get<std::size_t>() != rows.size()) {
    throw InvalidInput("matrix JSON: n = " + std::to_string(j["n"].get<std::size_t>()) +
                       " but " + std::to_string(rows.size()) + " rows given");
  }
  return NormalMatrix::from_rows(rows);
}

inline NormalMatrix load_matrix(const std::filesystem::path& path) {
  try {
    return matrix_from_json(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

// ---- sequences and tabulated functions -------------------------------------

namespace detail {

inline std::vector<std::vector<double>> parse_csv_numbers(const std::string& text,
                                                          const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw InvalidInput(origin + ": non-numeric row '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// JSON array (or {"values": [...], "base": 0|1}) or single-column CSV.
inline SequencePrefix load_sequence(const std::filesystem::path& path,
                                    IndexBase base = IndexBase::zero) {
  const std::string text = read_text(path);
  if (path.extension() == ".json") {
    try {
      const json j = json::parse(text);
      if (j.is_array()) return SequencePrefix(j.get<std::vector<double>>(), base);
      const int b = j.value("base", static_cast<int>(base));
      return SequencePrefix(j.at("values").get<std::vector<double>>(),
                            b == 1 ? IndexBase::one : IndexBase::zero);
    } catch (const json::exception& e) {
      throw InvalidInput(path.string() + ": " + e.what());
    }
  }
  std::vector<double> values;
  for (const auto& row : detail::parse_csv_numbers(text, path.string())) {
    if (row.size() != 1) throw InvalidInput(path.string() + ": expected a single column");
    values.push_back(row[0]);
  }
  return SequencePrefix(std::move(values), base);
}

/// CSV with columns t, f(t).
inline PeriodicFunction load_tabulated_function(const std::filesystem::path& path) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& row : detail::parse_csv_numbers(read_text(path), path.string())) {
    if (row.size() != 2) throw InvalidInput(path.string() + ": expected columns t,f");
    samples.emplace_back(row[0], row[1]);
  }
  return tabulated_function(std::move(samples), "table:" + path.filename().string());
}

inline json to_json(const SequencePrefix& s) {
  return {{"base", static_cast<int>(s.base())}, {"values", s.data()}};
}

}  // namespace summatrix

#endif  // SUMMATRIX_IO_HPP

#ifndef SUMMATRIX_REPORT_HPP
#define SUMMATRIX_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "summatrix/types.hpp"

namespace summatrix {

enum class Verdict { pass, fail, inconclusive };

/// Pointwise checks test facts about individual entries; asymptotic checks
/// are finite-prefix proxies for limit statements.
enum class CheckKind { pointwise, asymptotic };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

inline const char* to_string(CheckKind k) {
  return k == CheckKind::pointwise ? "pointwise" : "asymptotic";
}

/// Every knob used by a finite-prefix verdict. Reports echo the ones they use.
struct Thresholds {
  // O(.) checks: sup over the full prefix against sup over its first 3/4.
  double stabilization_pass = 1.05;
  double stabilization_inconclusive = 1.25;
  // assess_boundedness
  double tail_increment_fraction = 0.05;
  double tail_increment_floor = 1e-9;
  double growth_exponent_max = 0.1;
  // check_quasi_monotone
  double positivity_tail_fraction = 0.5;
  double decay_window_fraction = 0.1;
  double decay_ratio = 0.1;
  // exact equalities and inequalities
  double equality_tolerance = 1e-12;
  double monotone_slack = 1e-15;
  // bv_profile: relative change of the last dyadic refinement
  double bv_stabilization = 0.01;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct CheckReport {
  std::string id;
  Verdict verdict = Verdict::inconclusive;
  CheckKind kind = CheckKind::asymptotic;
  /// Smallest constant witnessing an O(.) claim over the prefix.
  std::optional<double> bounding_constant;
  std::optional<Index> first_violation;
  /// Column of the first violation for checks over matrix entries.
  std::optional<Index> violation_column;
  std::map<std::string, double> thresholds;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::pass; }
  bool failed() const { return verdict == Verdict::fail; }
};

/// Running-sup stabilization of a ratio sequence: the O(.) proxy.
///
/// Let S_all be the sup over the whole prefix and S_head the sup over its
/// first three quarters. The verdict is pass when S_all <= pass * S_head,
/// inconclusive when S_all <= inconclusive * S_head, and fail otherwise, in
/// which case the first tail index exceeding pass * S_head is the violation.
/// Non-finite ratios fail at their index.
inline CheckReport stabilization_report(std::string id,
                                        const SequencePrefix& ratios,
                                        const Thresholds& thr = {}) {
  if (ratios.size() < 4) {
    throw InvalidInput(id + ": stabilization needs at least 4 ratios, got " +
                       std::to_string(ratios.size()));
  }
  CheckReport r;
  r.id = std::move(id);
  r.kind = CheckKind::asymptotic;
  r.thresholds = {{"stabilization_pass", thr.stabilization_pass},
                  {"stabilization_inconclusive", thr.stabilization_inconclusive},
                  {"head_fraction", 0.75}};

  const auto& v = ratios.data();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      r.verdict = Verdict::fail;
      r.first_violation = ratios.first_index() + static_cast<Index>(i);
      r.bounding_constant = v[i];
      r.notes.push_back("non-finite ratio");
      return r;
    }
  }
  const std::size_t head_len = v.size() - v.size() / 4;
  const double sup_head =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(head_len));
  const double sup_all = *std::max_element(v.begin(), v.end());
  r.bounding_constant = sup_all;
  r.notes.push_back("sup over first 3/4 = " + std::to_string(sup_head) +
                    ", sup over prefix = " + std::to_string(sup_all));

  if (sup_all <= thr.stabilization_pass * sup_head) {
    r.verdict = Verdict::pass;
  } else if (sup_all <= thr.stabilization_inconclusive * sup_head) {
    r.verdict = Verdict::inconclusive;
  } else {
    r.verdict = Verdict::fail;
  }
  if (r.verdict != Verdict::pass) {
    for (std::size_t i = head_len; i < v.size(); ++i) {
      if (v[i] > thr.stabilization_pass * sup_head) {
        r.first_violation = ratios.first_index() + static_cast<Index>(i);
        break;
      }
    }
  }
  return r;
}

}  // namespace summatrix

#endif  // SUMMATRIX_REPORT_HPP

#ifndef SUMMATRIX_CHECKS_HPP
#define SUMMATRIX_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "summatrix/fourier.hpp"
#include "summatrix/indices.hpp"
#include "summatrix/matrix.hpp"
#include "summatrix/means.hpp"
#include "summatrix/report.hpp"
#include "summatrix/sequence.hpp"

namespace summatrix {

/// Wraps assess_boundedness as a check. A failing verdict points at the first
/// index of the tail half, where the unbounded increment was measured.
inline CheckReport boundedness_report(std::string id, const AbsoluteIndexTrace& trace,
                                      const Thresholds& thr = {}) {
  const BoundednessVerdict v = assess_boundedness(trace, thr);
  CheckReport r;
  r.id = std::move(id);
  r.kind = CheckKind::asymptotic;
  r.verdict = v.bounded_estimate ? Verdict::pass : Verdict::fail;
  r.bounding_constant = trace.cumulative.data().back();
  r.thresholds = {{"tail_increment_fraction", thr.tail_increment_fraction},
                  {"tail_increment_floor", thr.tail_increment_floor},
                  {"growth_exponent_max", thr.growth_exponent_max}};
  r.notes.push_back("S_N = " + std::to_string(trace.cumulative.data().back()) +
                    ", S_N - S_{N/2} = " + std::to_string(v.tail_increment) + " (limit " +
                    std::to_string(v.tail_threshold) + "), doubling exponent " +
                    std::to_string(v.fitted_growth_exponent));
  if (!v.bounded_estimate) {
    r.first_violation = static_cast<Index>(v.prefix_length / 2) + 1;
  }
  return r;
}

/// BV evidence from a dyadic refinement profile.
inline CheckReport bv_report(std::string id, const BvProfile& profile,
                             const Thresholds& thr = {}) {
  CheckReport r;
  r.id = std::move(id);
  r.kind = CheckKind::asymptotic;
  r.verdict = profile.stabilized ? Verdict::pass : Verdict::fail;
  r.bounding_constant = profile.variations.back();
  r.thresholds = {{"bv_stabilization", thr.bv_stabilization},
                  {"min_grid", static_cast<double>(profile.grids.front())},
                  {"max_grid", static_cast<double>(profile.grids.back())}};
  std::string levels = "variation by grid:";
  for (std::size_t i = 0; i < profile.grids.size(); ++i) {
    levels += " " + std::to_string(profile.grids[i]) + "->" + std::to_string(profile.variations[i]);
  }
  r.notes.push_back(std::move(levels));
  if (!profile.stabilized) r.first_violation = static_cast<Index>(profile.grids.back());
  return r;
}

/// P_n = O(n p_n): stabilization of P_n / (n p_n), n >= 1.
inline CheckReport check_Pn_O_npn(const WeightSystem& w, const Thresholds& thr = {}) {
  if (w.size() < 16) throw InvalidInput("check_Pn_O_npn needs a prefix of at least 16");
  std::vector<double> ratios;
  ratios.reserve(w.size() - 1);
  for (Index n = 1; n < w.p.end_index(); ++n) {
    ratios.push_back(w.P[n] / (static_cast<double>(n) * w.p[n]));
  }
  return stabilization_report("Pn_O_npn", SequencePrefix(std::move(ratios), IndexBase::one),
                              thr);
}

namespace detail {

inline void require_profile_fits(const FactorProfile& fp, const WeightSystem& w) {
  if (fp.lambda.base() != IndexBase::one) {
    throw InvalidInput("factor profile must be indexed from 1");
  }
  if (fp.lambda.size() != fp.companion.size() || fp.lambda.size() != fp.delta.size()) {
    throw InvalidInput("factor profile sequences must have equal lengths");
  }
  if (fp.size() < 16) throw InvalidInput("factor profile needs at least 16 entries");
  if (w.X.size() < fp.size()) {
    throw InvalidInput("weight system covers X_1..X_" + std::to_string(w.X.size()) +
                       ", factor profile needs X_1..X_" + std::to_string(fp.size()));
  }
}

inline AbsoluteIndexTrace series_trace(std::vector<double> terms) {
  return make_trace(IndexMethod::series, 1.0, std::move(terms));
}

}  // namespace detail

/// Theorem hypotheses on (λ_n, A_n, δ_n):
///   factor_lambda_null               λ_n -> 0 (decay proxy)
///   factor_companion_quasi_monotone  A_n is δ-quasi-monotone
///   factor_sum_n_X_delta             Σ n X_n δ_n < ∞
///   factor_sum_A_X                   Σ A_n X_n converges (|A_n| X_n summed)
///   factor_lambda_difference         |Δλ_n| <= |A_n|
inline std::vector<CheckReport> check_factor_hypotheses(const FactorProfile& fp,
                                                        const WeightSystem& w,
                                                        const Thresholds& thr = {}) {
  detail::require_profile_fits(fp, w);
  const Index end = fp.lambda.end_index();
  std::vector<CheckReport> out;

  {
    CheckReport r;
    r.id = "factor_lambda_null";
    r.kind = CheckKind::asymptotic;
    const auto n_total = static_cast<double>(fp.size());
    const auto window = std::max<Index>(
        1, static_cast<Index>(std::ceil(thr.decay_window_fraction * n_total)));
    const Index tail_start = end - window;
    double head = 0.0;
    double tail = 0.0;
    for (Index n = 1; n < tail_start; ++n) head = std::max(head, std::abs(fp.lambda[n]));
    for (Index n = tail_start; n < end; ++n) tail = std::max(tail, std::abs(fp.lambda[n]));
    r.thresholds = {{"decay_window_fraction", thr.decay_window_fraction},
                    {"decay_ratio", thr.decay_ratio}};
    r.bounding_constant = tail;
    r.notes.push_back("tail max |lambda| " + std::to_string(tail) + " vs head max " +
                      std::to_string(head));
    r.verdict = tail <= thr.decay_ratio * head ? Verdict::pass : Verdict::fail;
    if (r.failed()) {
      for (Index n = tail_start; n < end; ++n) {
        if (std::abs(fp.lambda[n]) > thr.decay_ratio * head) {
          r.first_violation = n;
          break;
        }
      }
    }
    out.push_back(std::move(r));
  }

  {
    const bool zero = std::all_of(fp.companion.begin(), fp.companion.end(),
                                  [](double x) { return x == 0.0; });
    CheckReport r;
    if (zero) {
      r.verdict = Verdict::pass;
      r.kind = CheckKind::pointwise;
      r.notes.push_back("identically zero companion: vacuous, any positive quasi-monotone "
                        "sequence dominates |Δλ_n| = 0");
    } else {
      r = check_quasi_monotone(fp.companion, fp.delta, thr.positivity_tail_fraction, thr);
    }
    r.id = "factor_companion_quasi_monotone";
    out.push_back(std::move(r));
  }

  std::vector<double> nxd, ax;
  for (Index n = 1; n < end; ++n) {
    nxd.push_back(static_cast<double>(n) * w.X[n] * fp.delta[n]);
    ax.push_back(std::abs(fp.companion[n]) * w.X[n]);
  }
  out.push_back(boundedness_report("factor_sum_n_X_delta", detail::series_trace(nxd), thr));
  out.push_back(boundedness_report("factor_sum_A_X", detail::series_trace(ax), thr));
  out.back().notes.push_back("convergence judged on |A_n| X_n (A_n > 0 ultimately)");

  {
    CheckReport r;
    r.id = "factor_lambda_difference";
    r.kind = CheckKind::pointwise;
    r.verdict = Verdict::pass;
    double worst = 0.0;
    for (Index n = 1; n + 1 < end; ++n) {
      const double d = std::abs(fp.lambda[n] - fp.lambda[n + 1]);
      const double bound = std::abs(fp.companion[n]);
      if (bound > 0.0) worst = std::max(worst, d / bound);
      if (d > bound) {
        r.verdict = Verdict::fail;
        r.first_violation = n;
        r.notes.push_back("|Δλ_n| = " + std::to_string(d) + " > |A_n| = " +
                          std::to_string(bound) + " at n = " + std::to_string(n));
        break;
      }
    }
    r.bounding_constant = worst;
    out.push_back(std::move(r));
  }
  return out;
}

/// Σ_{n<=m} (p_n/P_n)|t_n|^k / X_n^{k-1} = O(X_m), with t_n the (C,1) mean
/// of (n a_n) for the series a (indexed from 0).
inline CheckReport check_tn_condition(const SequencePrefix& a, const WeightSystem& w, double k,
                                      const Thresholds& thr = {}) {
  detail::require_exponent(k);
  if (a.size() > w.size()) {
    throw InvalidInput("check_tn_condition: series longer than the weight prefix");
  }
  const CesaroMeans m = cesaro_means(a, 1.0);
  std::vector<double> ratios;
  double acc = 0.0;
  for (Index n = 1; n < m.t.end_index(); ++n) {
    acc += w.p[n] / w.P[n] * std::pow(std::abs(m.t[n]), k) / std::pow(w.X[n], k - 1.0);
    ratios.push_back(acc / w.X[n]);
  }
  CheckReport r = stabilization_report("tn_condition", SequencePrefix(ratios, IndexBase::one),
                                       thr);
  r.thresholds["k"] = k;
  return r;
}

/// Conditions on a positive normal matrix (entries >= 0, diagonal > 0):
///   matrix_abar_n0_unit         ā_{n0} = 1
///   matrix_column_nonincreasing a_{n-1,v} >= a_{nv} for n >= v+1
///   matrix_diagonal_O_pn_Pn     a_{nn} = O(p_n/P_n)
///   matrix_ahat_O_v_dbar        â_{n,v+1} = O(v |Δ̄a_{nv}|), Δ̄a_{nv} = a_{nv} - a_{n-1,v}
template <TriangularMatrix M>
std::vector<CheckReport> check_matrix_conditions(const M& m, const WeightSystem& w,
                                                 const Thresholds& thr = {}) {
  const std::size_t dim = m.dim();
  if (dim < 8) throw InvalidInput("check_matrix_conditions needs at least 8 rows");
  if (dim > w.size()) {
    throw InvalidInput("check_matrix_conditions: weight prefix shorter than the matrix");
  }
  const std::string positivity =
      "positivity convention: entries >= 0 and diagonal > 0";

  CheckReport unit{.id = "matrix_abar_n0_unit", .verdict = Verdict::pass,
                   .kind = CheckKind::pointwise};
  CheckReport column{.id = "matrix_column_nonincreasing", .verdict = Verdict::pass,
                     .kind = CheckKind::pointwise};
  std::vector<double> diag_ratio(dim);
  std::vector<double> row_sup;
  row_sup.reserve(dim);
  std::optional<std::pair<Index, Index>> hat_violation;
  double worst_unit = 0.0;

  // Compensated tail sums: â entries shrink like 1/n^2 and sit under the
  // accumulated rounding of plain sums once n reaches a few thousand.
  for_each_associated_row(m, [&](const AssociatedRow& row) {
    const Index n = row.n;
    for (std::size_t v = 0; v < row.a.size(); ++v) {
      if (row.a[v] < 0.0 || (static_cast<Index>(v) == n && !(row.a[v] > 0.0))) {
        throw DomainError("matrix is not positive: entry (" + std::to_string(n) + ", " +
                          std::to_string(v) + ") = " + std::to_string(row.a[v]));
      }
    }
    const double dev = std::abs(row.abar[0] - 1.0);
    worst_unit = std::max(worst_unit, dev);
    if (dev > thr.equality_tolerance && !unit.first_violation) {
      unit.verdict = Verdict::fail;
      unit.first_violation = n;
    }
    if (n >= 1 && !column.first_violation) {
      for (std::size_t v = 0; v < row.a_prev.size(); ++v) {
        if (row.a_prev[v] < row.a[v] - thr.monotone_slack) {
          column.verdict = Verdict::fail;
          column.first_violation = n;
          column.violation_column = static_cast<Index>(v);
          break;
        }
      }
    }
    diag_ratio[static_cast<std::size_t>(n)] = row.a.back() * w.P[n] / w.p[n];
    if (n >= 2) {
      double sup = 0.0;
      for (std::size_t v = 1; v + 1 <= static_cast<std::size_t>(n); ++v) {
        const double hat = std::abs(row.ahat[v + 1]);
        const double dbar = std::abs(row.a[v] - row.a_prev[v]);
        if (dbar == 0.0) {
          if (hat != 0.0 && !hat_violation) {
            hat_violation = std::make_pair(n, static_cast<Index>(v));
          }
          continue;
        }
        sup = std::max(sup, hat / (static_cast<double>(v) * dbar));
      }
      row_sup.push_back(sup);
    }
  }, Summation::compensated);

  unit.bounding_constant = worst_unit;
  unit.thresholds = {{"equality_tolerance", thr.equality_tolerance}};
  unit.notes.push_back("max |abar_n0 - 1| = " + std::to_string(worst_unit));
  column.thresholds = {{"monotone_slack", thr.monotone_slack}};

  CheckReport diag = stabilization_report("matrix_diagonal_O_pn_Pn",
                                          SequencePrefix(diag_ratio, IndexBase::zero), thr);
  CheckReport hat = stabilization_report("matrix_ahat_O_v_dbar",
                                         SequencePrefix(row_sup, IndexBase::zero), thr);
  // row_sup[i] belongs to row n = i + 2.
  if (hat.first_violation) *hat.first_violation += 2;
  hat.notes.push_back("Δ̄a_{nv} read as the row difference a_{nv} - a_{n-1,v}; "
                      "ratio taken over n >= 2, 1 <= v <= n-1");
  if (hat_violation) {
    hat.verdict = Verdict::fail;
    hat.kind = CheckKind::pointwise;
    hat.first_violation = hat_violation->first;
    hat.violation_column = hat_violation->second;
    hat.notes.push_back("Δ̄a_{nv} = 0 while â_{n,v+1} != 0");
  }

  std::vector<CheckReport> out{std::move(unit), std::move(column), std::move(diag),
                               std::move(hat)};
  for (auto& r : out) r.notes.push_back(positivity);
  return out;
}

/// Conclusions that follow from the factor hypotheses:
///   lemma_lambda_X_bounded  |λ_n| X_n = O(1)
///   lemma_n_X_A_bounded     n X_n |A_n| = O(1)
///   lemma_sum_n_X_dA        Σ n X_n |ΔA_n| < ∞
inline std::vector<CheckReport> check_lemma3(const FactorProfile& fp, const WeightSystem& w,
                                             const Thresholds& thr = {}) {
  detail::require_profile_fits(fp, w);
  const Index end = fp.lambda.end_index();
  std::vector<double> lx, nxa, nxda;
  for (Index n = 1; n < end; ++n) {
    const double nd = static_cast<double>(n);
    lx.push_back(std::abs(fp.lambda[n]) * w.X[n]);
    nxa.push_back(nd * w.X[n] * std::abs(fp.companion[n]));
    if (n + 1 < end) {
      nxda.push_back(nd * w.X[n] * std::abs(fp.companion[n] - fp.companion[n + 1]));
    }
  }
  std::vector<CheckReport> out;
  out.push_back(stabilization_report("lemma_lambda_X_bounded",
                                     SequencePrefix(std::move(lx), IndexBase::one), thr));
  out.push_back(stabilization_report("lemma_n_X_A_bounded",
                                     SequencePrefix(std::move(nxa), IndexBase::one), thr));
  out.push_back(boundedness_report("lemma_sum_n_X_dA", detail::series_trace(nxda), thr));
  return out;
}

/// If every hypothesis passes, no conclusion may fail. Inconclusive
/// conclusions do not contradict the implication.
inline bool implication_holds(const std::vector<CheckReport>& hypotheses,
                              const std::vector<CheckReport>& conclusions) {
  const bool premises = std::all_of(hypotheses.begin(), hypotheses.end(),
                                    [](const CheckReport& r) { return r.passed(); });
  if (!premises) return true;
  return std::none_of(conclusions.begin(), conclusions.end(),
                      [](const CheckReport& r) { return r.failed(); });
}

}  // namespace summatrix

#endif  // SUMMATRIX_CHECKS_HPP

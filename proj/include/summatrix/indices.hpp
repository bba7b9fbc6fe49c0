#ifndef SUMMATRIX_INDICES_HPP
#define SUMMATRIX_INDICES_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "summatrix/matrix.hpp"
#include "summatrix/means.hpp"
#include "summatrix/report.hpp"
#include "summatrix/sequence.hpp"

namespace summatrix {

enum class IndexMethod { cesaro, riesz, matrix, series };

inline const char* to_string(IndexMethod m) {
  switch (m) {
    case IndexMethod::cesaro: return "cesaro";
    case IndexMethod::riesz: return "riesz";
    case IndexMethod::matrix: return "matrix";
    case IndexMethod::series: return "series";
  }
  return "?";
}

/// Summands of an absolute summability index and their partial sums,
/// both indexed from 1.
struct AbsoluteIndexTrace {
  IndexMethod method = IndexMethod::series;
  double k = 1.0;
  SequencePrefix terms;
  SequencePrefix cumulative;
};

/// Builds a trace from nonnegative summands t_1, t_2, ...
inline AbsoluteIndexTrace make_trace(IndexMethod method, double k, std::vector<double> terms) {
  std::vector<double> cum(terms.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i] >= 0.0)) {
      throw InvalidInput("index term " + std::to_string(i + 1) + " is negative or NaN");
    }
    acc += terms[i];
    cum[i] = acc;
  }
  return {method, k, SequencePrefix(std::move(terms), IndexBase::one),
          SequencePrefix(std::move(cum), IndexBase::one)};
}

namespace detail {

inline void require_exponent(double k) {
  if (!(k >= 1.0)) throw DomainError("exponent k must be >= 1, got " + std::to_string(k));
}

// ratio^(k-1) |diff|^k, in log space once the ratio exceeds 1e8.
inline double weighted_power(double ratio, double diff, double k) {
  const double mag = std::abs(diff);
  if (mag == 0.0) return 0.0;
  if (ratio > 1e8) return std::exp((k - 1.0) * std::log(ratio) + k * std::log(mag));
  return std::pow(ratio, k - 1.0) * std::pow(mag, k);
}

}  // namespace detail

/// |C, α|_k summands (1/n)|t_n^α|^k. The equivalent form
/// n^{k-1}|u_n^α - u_{n-1}^α|^k is evaluated alongside; a disagreement beyond
/// 1e-8 relative (plus a cancellation floor) raises std::logic_error.
inline AbsoluteIndexTrace cesaro_index(const SequencePrefix& a, double alpha, double k) {
  detail::require_exponent(k);
  const CesaroMeans m = cesaro_means(a, alpha);
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> terms(m.t.size());
  for (Index n = 1; n < m.u.end_index(); ++n) {
    const double nd = static_cast<double>(n);
    const double t = m.t[n];
    const double from_u = nd * (m.u[n] - m.u[n - 1]);
    const double floor = 4.0 * eps * nd * nd * (std::abs(m.u[n]) + std::abs(m.u[n - 1]));
    if (std::abs(from_u - t) > 1e-8 * std::max(std::abs(t), std::abs(from_u)) + floor) {
      throw std::logic_error("cesaro_index: n(u_n - u_{n-1}) = t_n fails at n = " +
                             std::to_string(n));
    }
    terms[static_cast<std::size_t>(n - 1)] = std::pow(std::abs(t), k) / nd;
  }
  return make_trace(IndexMethod::cesaro, k, std::move(terms));
}

/// |N̄, p_n|_k summands (P_n/p_n)^{k-1}|w_n - w_{n-1}|^k.
inline AbsoluteIndexTrace riesz_index(const SequencePrefix& a, const WeightSystem& w, double k) {
  detail::require_exponent(k);
  if (a.base() != IndexBase::zero) throw InvalidInput("series terms must be indexed from 0");
  const SequencePrefix wm = riesz_mean(partial_sums(a), w);
  std::vector<double> terms(wm.size() > 0 ? wm.size() - 1 : 0);
  for (Index n = 1; n < wm.end_index(); ++n) {
    terms[static_cast<std::size_t>(n - 1)] =
        detail::weighted_power(w.P[n] / w.p[n], wm[n] - wm[n - 1], k);
  }
  return make_trace(IndexMethod::riesz, k, std::move(terms));
}

/// |A, p_n|_k summands from precomputed differences Δ̄A_n(s) (indexed from 1).
inline AbsoluteIndexTrace matrix_index_from_differences(const SequencePrefix& dAn,
                                                        const WeightSystem& w, double k) {
  detail::require_exponent(k);
  if (dAn.base() != IndexBase::one) throw InvalidInput("differences must be indexed from 1");
  if (static_cast<std::size_t>(dAn.end_index()) > w.size()) {
    throw InvalidInput("matrix_index: weight prefix shorter than the transform");
  }
  std::vector<double> terms(dAn.size());
  for (Index n = 1; n < dAn.end_index(); ++n) {
    terms[static_cast<std::size_t>(n - 1)] =
        detail::weighted_power(w.P[n] / w.p[n], dAn[n], k);
  }
  return make_trace(IndexMethod::matrix, k, std::move(terms));
}

/// |A, p_n|_k summands (P_n/p_n)^{k-1}|Δ̄A_n(s)|^k, with Δ̄A_n(s) taken from
/// the series form of the transform.
template <TriangularMatrix M>
AbsoluteIndexTrace matrix_index(const SequencePrefix& a, const M& m, const WeightSystem& w,
                                double k) {
  detail::require_exponent(k);
  if (m.dim() > w.size()) {
    throw InvalidInput("matrix_index: matrix dimension " + std::to_string(m.dim()) +
                       " exceeds weight prefix " + std::to_string(w.size()));
  }
  return matrix_index_from_differences(apply_series_form(m, a).dAn, w, k);
}

struct BoundednessVerdict {
  bool bounded_estimate = false;
  /// S_N - S_{N/2}
  double tail_increment = 0.0;
  /// log2(S_N / S_{N/2}): growth per doubling of the prefix.
  double fitted_growth_exponent = 0.0;
  std::size_t prefix_length = 0;
  double tail_threshold = 0.0;
  double exponent_threshold = 0.0;
};

/// Finite-prefix proxy for "Σ terms < ∞": bounded when the last half of the
/// prefix adds less than tail_increment_fraction * S_N + floor and the
/// doubling exponent of S stays below growth_exponent_max.
inline BoundednessVerdict assess_boundedness(const AbsoluteIndexTrace& trace,
                                             const Thresholds& thr = {}) {
  const auto& c = trace.cumulative.data();
  if (c.size() < 16) {
    throw InvalidInput("assess_boundedness needs at least 16 partial sums, got " +
                       std::to_string(c.size()));
  }
  const std::size_t N = c.size();
  const double total = c[N - 1];
  const double half = c[N / 2 - 1];
  BoundednessVerdict v;
  v.prefix_length = N;
  v.tail_increment = std::max(0.0, total - half);
  v.tail_threshold = thr.tail_increment_fraction * total + thr.tail_increment_floor;
  v.exponent_threshold = thr.growth_exponent_max;
  if (total <= 0.0) {
    v.fitted_growth_exponent = 0.0;
  } else if (half <= 0.0) {
    v.fitted_growth_exponent = std::numeric_limits<double>::infinity();
  } else {
    v.fitted_growth_exponent = std::log2(total / half);
  }
  v.bounded_estimate =
      v.tail_increment < v.tail_threshold && v.fitted_growth_exponent < v.exponent_threshold;
  return v;
}

}  // namespace summatrix

#endif  // SUMMATRIX_INDICES_HPP

#ifndef SUMMATRIX_MEANS_HPP
#define SUMMATRIX_MEANS_HPP

#include <string>
#include <vector>

#include "summatrix/sequence.hpp"
#include "summatrix/types.hpp"

namespace summatrix {

namespace detail {

// A_0^β, ..., A_{count-1}^β by the product recurrence. No domain check: the
// means need β = α - 1, which may be <= -1.
inline std::vector<double> binomial_coefficients(double beta, std::size_t count) {
  std::vector<double> c(count);
  if (count == 0) return c;
  c[0] = 1.0;
  for (std::size_t n = 1; n < count; ++n) {
    c[n] = c[n - 1] * (beta + static_cast<double>(n)) / static_cast<double>(n);
  }
  return c;
}

}  // namespace detail

/// A_n^α = (α+1)(α+2)...(α+n)/n!, with A_n^α = 0 for n < 0.
inline double cesaro_coefficient(double alpha, Index n) {
  if (!(alpha > -1.0)) {
    throw DomainError("Cesaro order must exceed -1, got " + std::to_string(alpha));
  }
  if (n < 0) return 0.0;
  double c = 1.0;
  for (Index i = 1; i <= n; ++i) {
    c *= (alpha + static_cast<double>(i)) / static_cast<double>(i);
  }
  return c;
}

/// u: means of the partial sums s_n (from n = 0);
/// t: means of n a_n (from n = 1).
struct CesaroMeans {
  double order = 1.0;
  SequencePrefix u;
  SequencePrefix t;
};

/// (C, α) means of the series with terms a (indexed from 0).
/// Order 1 uses a running average; other orders evaluate the O(N^2) sums.
inline CesaroMeans cesaro_means(const SequencePrefix& a, double alpha) {
  if (a.empty()) throw InvalidInput("cesaro_means needs a nonempty series");
  if (a.base() != IndexBase::zero) {
    throw InvalidInput("series terms must be indexed from 0");
  }
  if (!(alpha > -1.0)) {
    throw DomainError("Cesaro order must exceed -1, got " + std::to_string(alpha));
  }
  const std::size_t N = a.size();
  const SequencePrefix s = partial_sums(a);
  std::vector<double> u(N);
  std::vector<double> t(N - 1);

  if (alpha == 1.0) {
    // Extended accumulators leave one rounding per u_n, which keeps
    // n(u_n - u_{n-1}) close to t_n even when t_n is small.
    long double partial = 0.0L;
    long double sum_s = 0.0L;
    long double sum_va = 0.0L;
    for (std::size_t n = 0; n < N; ++n) {
      partial += a.data()[n];
      sum_s += partial;
      sum_va += static_cast<long double>(n) * a.data()[n];
      const auto norm = static_cast<long double>(n + 1);
      u[n] = static_cast<double>(sum_s / norm);
      if (n >= 1) t[n - 1] = static_cast<double>(sum_va / norm);
    }
  } else {
    const auto outer = detail::binomial_coefficients(alpha, N);
    const auto inner = detail::binomial_coefficients(alpha - 1.0, N);
    for (std::size_t n = 0; n < N; ++n) {
      double su = 0.0;
      double st = 0.0;
      for (std::size_t v = 0; v <= n; ++v) {
        const double w = inner[n - v];
        su += w * s.data()[v];
        st += w * static_cast<double>(v) * a.data()[v];
      }
      u[n] = su / outer[n];
      if (n >= 1) t[n - 1] = st / outer[n];
    }
  }
  return {alpha, SequencePrefix(std::move(u), IndexBase::zero),
          SequencePrefix(std::move(t), IndexBase::one)};
}

/// (N̄, p_n) mean w_n = (1/P_n) Σ_{v<=n} p_v s_v of the sequence s.
inline SequencePrefix riesz_mean(const SequencePrefix& s, const WeightSystem& w) {
  if (s.base() != IndexBase::zero) throw InvalidInput("riesz_mean expects s indexed from 0");
  if (s.size() > w.size()) {
    throw InvalidInput("riesz_mean: sequence length " + std::to_string(s.size()) +
                       " exceeds weight prefix " + std::to_string(w.size()));
  }
  std::vector<double> out(s.size());
  double acc = 0.0;
  for (Index n = 0; n < s.end_index(); ++n) {
    acc += w.p[n] * s[n];
    out[static_cast<std::size_t>(n)] = acc / w.P[n];
  }
  return SequencePrefix(std::move(out), IndexBase::zero);
}

}  // namespace summatrix

#endif  // SUMMATRIX_MEANS_HPP

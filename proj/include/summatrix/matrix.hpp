#ifndef SUMMATRIX_MATRIX_HPP
#define SUMMATRIX_MATRIX_HPP

#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "summatrix/sequence.hpp"
#include "summatrix/types.hpp"

namespace summatrix {

/// A lower-triangular array addressed by (n, v) with 0 <= v <= n < dim().
/// Entries outside the triangle are zero and are never requested.
template <class M>
concept TriangularMatrix = requires(const M& m, Index n, Index v) {
  { m.dim() } -> std::convertible_to<std::size_t>;
  { m.entry(n, v) } -> std::convertible_to<double>;
};

/// Row-major packed lower triangle; row n starts at offset n(n+1)/2.
class PackedTriangle {
 public:
  PackedTriangle() = default;
  explicit PackedTriangle(std::size_t dim) : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double entry(Index n, Index v) const noexcept { return data_[offset(n, v)]; }
  double& entry(Index n, Index v) noexcept { return data_[offset(n, v)]; }

  std::span<const double> row(Index n) const noexcept {
    return {data_.data() + offset(n, 0), static_cast<std::size_t>(n + 1)};
  }
  std::span<double> row(Index n) noexcept {
    return {data_.data() + offset(n, 0), static_cast<std::size_t>(n + 1)};
  }

  friend bool operator==(const PackedTriangle&, const PackedTriangle&) = default;

 private:
  static std::size_t offset(Index n, Index v) noexcept {
    const auto un = static_cast<std::size_t>(n);
    return un * (un + 1) / 2 + static_cast<std::size_t>(v);
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular matrix with nonzero, finite diagonal and finite entries.
class NormalMatrix {
 public:
  NormalMatrix() = default;

  explicit NormalMatrix(PackedTriangle entries) : a_(std::move(entries)) { validate(); }

  /// Row n must hold exactly n + 1 entries.
  static NormalMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    PackedTriangle t(rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
      if (rows[n].size() != n + 1) {
        throw InvalidInput("row " + std::to_string(n) + " has " +
                           std::to_string(rows[n].size()) + " entries, expected " +
                           std::to_string(n + 1));
      }
      for (std::size_t v = 0; v <= n; ++v) {
        t.entry(static_cast<Index>(n), static_cast<Index>(v)) = rows[n][v];
      }
    }
    return NormalMatrix(std::move(t));
  }

  template <TriangularMatrix M>
  static NormalMatrix materialize(const M& m) {
    PackedTriangle t(m.dim());
    for (Index n = 0; n < static_cast<Index>(m.dim()); ++n) {
      for (Index v = 0; v <= n; ++v) t.entry(n, v) = m.entry(n, v);
    }
    return NormalMatrix(std::move(t));
  }

  std::size_t dim() const noexcept { return a_.dim(); }
  double entry(Index n, Index v) const noexcept { return a_.entry(n, v); }
  std::span<const double> row(Index n) const noexcept { return a_.row(n); }
  const PackedTriangle& entries() const noexcept { return a_; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(dim());
    for (Index n = 0; n < static_cast<Index>(dim()); ++n) {
      auto r = a_.row(n);
      out[static_cast<std::size_t>(n)].assign(r.begin(), r.end());
    }
    return out;
  }

  friend bool operator==(const NormalMatrix&, const NormalMatrix&) = default;

 private:
  void validate() const {
    if (a_.dim() == 0) throw InvalidInput("normal matrix must have at least one row");
    for (Index n = 0; n < static_cast<Index>(a_.dim()); ++n) {
      for (Index v = 0; v <= n; ++v) {
        if (!std::isfinite(a_.entry(n, v))) {
          throw InvalidInput("matrix entry (" + std::to_string(n) + ", " +
                             std::to_string(v) + ") is not finite");
        }
      }
      if (a_.entry(n, n) == 0.0) {
        throw InvalidInput("diagonal entry " + std::to_string(n) + " is zero");
      }
    }
  }

  PackedTriangle a_;
};

/// a_{nv} = δ_{nv}.
struct IdentityMatrix {
  std::size_t n = 0;
  std::size_t dim() const noexcept { return n; }
  double entry(Index r, Index c) const noexcept { return r == c ? 1.0 : 0.0; }
};

/// a_{nv} = 1/(n+1), the (C,1) matrix.
struct CesaroOneMatrix {
  std::size_t n = 0;
  std::size_t dim() const noexcept { return n; }
  double entry(Index r, Index) const noexcept { return 1.0 / static_cast<double>(r + 1); }
};

/// a_{nv} = p_v / P_n evaluated on demand.
class WeightedMeanMatrix {
 public:
  WeightedMeanMatrix(const WeightSystem& w, std::size_t dim) : w_(w), dim_(dim) {
    if (dim == 0 || dim > w.size()) {
      throw InvalidInput("weighted-mean dimension " + std::to_string(dim) +
                         " outside weight prefix of length " + std::to_string(w.size()));
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  double entry(Index n, Index v) const noexcept { return w_.p[v] / w_.P[n]; }
  const WeightSystem& weights() const noexcept { return w_; }

 private:
  WeightSystem w_;
  std::size_t dim_;
};

/// Dense (N̄, p_n) matrix on rows 0..N-1.
inline NormalMatrix weighted_mean_matrix(const WeightSystem& w, std::size_t N) {
  if (N > w.size()) {
    throw InvalidInput("weighted_mean_matrix: N = " + std::to_string(N) +
                       " exceeds weight prefix " + std::to_string(w.size()));
  }
  return NormalMatrix::materialize(WeightedMeanMatrix(w, N));
}

enum class Summation { plain, compensated };

/// Ā (row tail sums) and Â (row differences of Ā).
struct AssociatedMatrices {
  PackedTriangle abar;
  PackedTriangle ahat;

  std::size_t dim() const noexcept { return abar.dim(); }
};

namespace detail {

// ā_{nv} = Σ_{i=v..n} a_{ni}, accumulated right to left.
inline void tail_sums(std::span<const double> row, std::span<double> out, Summation mode) {
  double acc = 0.0;
  double carry = 0.0;
  for (std::size_t i = row.size(); i-- > 0;) {
    if (mode == Summation::plain) {
      acc += row[i];
    } else {
      const double t = acc + row[i];
      if (std::abs(acc) >= std::abs(row[i])) {
        carry += (acc - t) + row[i];
      } else {
        carry += (row[i] - t) + acc;
      }
      acc = t;
    }
    out[i] = acc + carry;
  }
}

}  // namespace detail

/// One row of A together with the matching rows of Ā and Â, and the
/// previous rows of A and Ā (empty for n = 0).
struct AssociatedRow {
  Index n;
  std::span<const double> a;
  std::span<const double> abar;
  std::span<const double> ahat;
  std::span<const double> a_prev;
  std::span<const double> abar_prev;
};

/// Streams the rows of A, Ā and Â in order using O(dim) memory.
template <TriangularMatrix M, class F>
void for_each_associated_row(const M& m, F&& visit, Summation mode = Summation::plain) {
  const auto N = static_cast<Index>(m.dim());
  std::vector<double> a_prev, abar_prev, a_row, abar_row, ahat_row;
  for (Index n = 0; n < N; ++n) {
    const auto len = static_cast<std::size_t>(n + 1);
    a_row.resize(len);
    abar_row.resize(len);
    ahat_row.resize(len);
    for (Index v = 0; v <= n; ++v) a_row[static_cast<std::size_t>(v)] = m.entry(n, v);
    detail::tail_sums(a_row, abar_row, mode);
    for (std::size_t v = 0; v < len; ++v) {
      ahat_row[v] = abar_row[v] - (v < abar_prev.size() ? abar_prev[v] : 0.0);
    }
    visit(AssociatedRow{n, a_row, abar_row, ahat_row, a_prev, abar_prev});
    std::swap(a_prev, a_row);
    std::swap(abar_prev, abar_row);
  }
}

/// Weighted means get Â from the closed form â_{nv} = p_n P_{v-1}/(P_n P_{n-1}).
/// Differencing two tail sums close to 1 would bury entries of size 1/P_n
/// under rounding once P_n grows geometrically.
template <class F>
void for_each_associated_row(const WeightedMeanMatrix& m, F&& visit,
                             Summation mode = Summation::plain) {
  const auto N = static_cast<Index>(m.dim());
  const WeightSystem& w = m.weights();
  std::vector<double> a_prev, abar_prev, a_row, abar_row, ahat_row;
  for (Index n = 0; n < N; ++n) {
    const auto len = static_cast<std::size_t>(n + 1);
    a_row.resize(len);
    abar_row.resize(len);
    ahat_row.resize(len);
    for (Index v = 0; v <= n; ++v) a_row[static_cast<std::size_t>(v)] = m.entry(n, v);
    detail::tail_sums(a_row, abar_row, mode);
    if (n == 0) {
      ahat_row[0] = abar_row[0];
    } else {
      ahat_row[0] = 0.0;
      const double scale = w.p[n] / w.P[n] / w.P[n - 1];
      for (Index v = 1; v <= n; ++v) ahat_row[static_cast<std::size_t>(v)] = scale * w.P[v - 1];
    }
    visit(AssociatedRow{n, a_row, abar_row, ahat_row, a_prev, abar_prev});
    std::swap(a_prev, a_row);
    std::swap(abar_prev, abar_row);
  }
}

template <TriangularMatrix M>
AssociatedMatrices associate(const M& m, Summation mode = Summation::plain) {
  AssociatedMatrices out{PackedTriangle(m.dim()), PackedTriangle(m.dim())};
  for_each_associated_row(
      m,
      [&](const AssociatedRow& row) {
        auto abar = out.abar.row(row.n);
        auto ahat = out.ahat.row(row.n);
        std::copy(row.abar.begin(), row.abar.end(), abar.begin());
        std::copy(row.ahat.begin(), row.ahat.end(), ahat.begin());
      },
      mode);
  return out;
}

/// A_n(s) (from n = 0) and Δ̄A_n(s) = A_n(s) - A_{n-1}(s) (from n = 1).
struct MatrixTransformResult {
  SequencePrefix An;
  SequencePrefix dAn;
};

namespace detail {

inline void require_length(const SequencePrefix& s, std::size_t dim, const char* what) {
  if (s.base() != IndexBase::zero) {
    throw InvalidInput(std::string(what) + ": input must be indexed from 0");
  }
  if (s.size() < dim) {
    throw InvalidInput(std::string(what) + ": input length " + std::to_string(s.size()) +
                       " shorter than matrix dimension " + std::to_string(dim));
  }
}

inline MatrixTransformResult finish_transform(std::vector<double> An) {
  std::vector<double> d(An.empty() ? 0 : An.size() - 1);
  for (std::size_t n = 1; n < An.size(); ++n) d[n - 1] = An[n] - An[n - 1];
  return {SequencePrefix(std::move(An), IndexBase::zero),
          SequencePrefix(std::move(d), IndexBase::one)};
}

}  // namespace detail

/// A_n(s) = Σ_{v<=n} a_{nv} s_v.
template <TriangularMatrix M>
MatrixTransformResult apply(const M& m, const SequencePrefix& s) {
  detail::require_length(s, m.dim(), "apply");
  const auto N = static_cast<Index>(m.dim());
  std::vector<double> An(m.dim());
  for (Index n = 0; n < N; ++n) {
    double acc = 0.0;
    for (Index v = 0; v <= n; ++v) acc += m.entry(n, v) * s[v];
    An[static_cast<std::size_t>(n)] = acc;
  }
  return detail::finish_transform(std::move(An));
}

/// Same transform driven by the series terms: A_n(s) = Σ ā_{nv} a_v and
/// Δ̄A_n(s) = Σ â_{nv} a_v.
template <TriangularMatrix M>
MatrixTransformResult apply_series_form(const M& m, const SequencePrefix& a,
                                        Summation mode = Summation::plain) {
  detail::require_length(a, m.dim(), "apply_series_form");
  std::vector<double> An(m.dim());
  std::vector<double> dAn(m.dim() > 0 ? m.dim() - 1 : 0);
  for_each_associated_row(
      m,
      [&](const AssociatedRow& row) {
        double level = 0.0;
        double diff = 0.0;
        for (std::size_t v = 0; v < row.abar.size(); ++v) {
          const double term = a.data()[v];
          level += row.abar[v] * term;
          diff += row.ahat[v] * term;
        }
        An[static_cast<std::size_t>(row.n)] = level;
        if (row.n >= 1) dAn[static_cast<std::size_t>(row.n - 1)] = diff;
      },
      mode);
  return {SequencePrefix(std::move(An), IndexBase::zero),
          SequencePrefix(std::move(dAn), IndexBase::one)};
}

inline MatrixTransformResult apply_series_form(const AssociatedMatrices& assoc,
                                               const SequencePrefix& a) {
  detail::require_length(a, assoc.dim(), "apply_series_form");
  const auto N = static_cast<Index>(assoc.dim());
  std::vector<double> An(assoc.dim());
  std::vector<double> dAn(assoc.dim() > 0 ? assoc.dim() - 1 : 0);
  for (Index n = 0; n < N; ++n) {
    double level = 0.0;
    double diff = 0.0;
    for (Index v = 0; v <= n; ++v) {
      level += assoc.abar.entry(n, v) * a[v];
      diff += assoc.ahat.entry(n, v) * a[v];
    }
    An[static_cast<std::size_t>(n)] = level;
    if (n >= 1) dAn[static_cast<std::size_t>(n - 1)] = diff;
  }
  return {SequencePrefix(std::move(An), IndexBase::zero),
          SequencePrefix(std::move(dAn), IndexBase::one)};
}

/// O(N) weighted-mean path: A_n(s) is the Riesz mean of the partial sums and
/// Δ̄A_n(s) = p_n/(P_n P_{n-1}) Σ_{v=1..n} P_{v-1} a_v.
inline MatrixTransformResult apply_series_form(const WeightedMeanMatrix& m,
                                               const SequencePrefix& a,
                                               Summation = Summation::plain) {
  detail::require_length(a, m.dim(), "apply_series_form");
  const auto& w = m.weights();
  const auto N = static_cast<Index>(m.dim());
  std::vector<double> An(m.dim());
  std::vector<double> dAn(m.dim() - 1);
  double s = 0.0;
  double weighted = 0.0;
  double lagged = 0.0;
  for (Index n = 0; n < N; ++n) {
    s += a[n];
    weighted += w.p[n] * s;
    An[static_cast<std::size_t>(n)] = weighted / w.P[n];
    if (n >= 1) {
      lagged += w.P[n - 1] * a[n];
      dAn[static_cast<std::size_t>(n - 1)] = w.p[n] / (w.P[n] * w.P[n - 1]) * lagged;
    }
  }
  return {SequencePrefix(std::move(An), IndexBase::zero),
          SequencePrefix(std::move(dAn), IndexBase::one)};
}

inline MatrixTransformResult apply_series_form(const IdentityMatrix& m,
                                               const SequencePrefix& a,
                                               Summation = Summation::plain) {
  detail::require_length(a, m.dim(), "apply_series_form");
  std::vector<double> An(m.dim());
  std::vector<double> dAn(m.dim() - 1);
  double s = 0.0;
  for (Index n = 0; n < static_cast<Index>(m.dim()); ++n) {
    s += a[n];
    An[static_cast<std::size_t>(n)] = s;
    if (n >= 1) dAn[static_cast<std::size_t>(n - 1)] = a[n];
  }
  return {SequencePrefix(std::move(An), IndexBase::zero),
          SequencePrefix(std::move(dAn), IndexBase::one)};
}

}  // namespace summatrix

#endif  // SUMMATRIX_MATRIX_HPP

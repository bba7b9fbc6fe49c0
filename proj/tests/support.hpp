#ifndef SUMMATRIX_TEST_SUPPORT_HPP
#define SUMMATRIX_TEST_SUPPORT_HPP

// Shared helpers: seeded random inputs and brute-force oracles written
// directly from the defining sums, independent of the library code paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "summatrix/summatrix.hpp"

namespace ts {

using summatrix::Index;

inline std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline bool close_rel(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

inline bool close_abs(double x, double y, double tol) { return std::abs(x - y) <= tol; }

// A_n^α as the plain product (α+1)(α+2)...(α+n)/n!, term by term.
inline double binomial_product(double alpha, int n) {
  double v = 1.0;
  for (int i = 1; i <= n; ++i) v *= (alpha + i) / i;
  return v;
}

// u_n^α and t_n^α from the double sums, with s_v recomputed per v.
struct BruteCesaro {
  std::vector<double> u, t;  // t[0] unused
};

inline BruteCesaro brute_cesaro(const std::vector<double>& a, double alpha) {
  const int N = static_cast<int>(a.size());
  BruteCesaro out{std::vector<double>(N), std::vector<double>(N)};
  for (int n = 0; n < N; ++n) {
    double su = 0.0, st = 0.0;
    for (int v = 0; v <= n; ++v) {
      double s = 0.0;
      for (int i = 0; i <= v; ++i) s += a[i];
      const double w = binomial_product(alpha - 1.0, n - v);
      su += w * s;
      st += w * v * a[v];
    }
    out.u[n] = su / binomial_product(alpha, n);
    out.t[n] = st / binomial_product(alpha, n);
  }
  return out;
}

// Ā and Â of a dense row list from the definitions.
struct BruteAssoc {
  std::vector<std::vector<double>> abar, ahat;
};

inline BruteAssoc brute_associate(const std::vector<std::vector<double>>& rows) {
  const std::size_t N = rows.size();
  BruteAssoc out;
  out.abar.resize(N);
  out.ahat.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    out.abar[n].resize(n + 1);
    out.ahat[n].resize(n + 1);
    for (std::size_t v = 0; v <= n; ++v) {
      double s = 0.0;
      for (std::size_t i = v; i <= n; ++i) s += rows[n][i];
      out.abar[n][v] = s;
    }
    for (std::size_t v = 0; v <= n; ++v) {
      const double prev = (n > 0 && v <= n - 1) ? out.abar[n - 1][v] : 0.0;
      out.ahat[n][v] = out.abar[n][v] - prev;
    }
  }
  return out;
}

// Random lower-triangular matrix: entries in [0,1], diagonal at least 0.1.
inline std::vector<std::vector<double>> random_rows(std::mt19937_64& rng, std::size_t N) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<std::vector<double>> rows(N);
  for (std::size_t n = 0; n < N; ++n) {
    rows[n].resize(n + 1);
    for (auto& x : rows[n]) x = d(rng);
    rows[n][n] = std::max(rows[n][n], 0.1);
  }
  return rows;
}

inline summatrix::SequencePrefix seq(std::vector<double> v,
                                     summatrix::IndexBase b = summatrix::IndexBase::zero) {
  return summatrix::SequencePrefix(std::move(v), b);
}

inline summatrix::WeightSystem ones(std::size_t n) {
  return summatrix::build_weight_system(seq(std::vector<double>(n, 1.0)));
}

}  // namespace ts

#endif

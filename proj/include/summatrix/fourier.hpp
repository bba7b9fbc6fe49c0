#ifndef SUMMATRIX_FOURIER_HPP
#define SUMMATRIX_FOURIER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "summatrix/report.hpp"
#include "summatrix/sequence.hpp"
#include "summatrix/types.hpp"

namespace summatrix {

/// Reduces t to (-π, π].
inline double reduce_angle(double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(t + std::numbers::pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - std::numbers::pi;
}

/// A 2π-periodic function given on (-π, π], with optional known jump
/// locations. Quadrature panels never straddle a registered jump.
class PeriodicFunction {
 public:
  using Evaluator = std::function<double(double)>;

  PeriodicFunction(Evaluator f, std::string description, std::vector<double> jumps = {})
      : f_(std::move(f)), description_(std::move(description)) {
    for (double j : jumps) jumps_.push_back(reduce_angle(j));
    std::sort(jumps_.begin(), jumps_.end());
    jumps_.erase(std::unique(jumps_.begin(), jumps_.end()), jumps_.end());
    probe();
  }

  double operator()(double t) const { return f_(reduce_angle(t)); }

  const std::string& description() const noexcept { return description_; }
  /// Jump locations, sorted, in (-π, π].
  std::span<const double> jumps() const noexcept { return jumps_; }

 private:
  // The evaluator must be finite on a uniform midpoint grid of 4096 points.
  void probe() const {
    constexpr int points = 4096;
    const double h = 2.0 * std::numbers::pi / points;
    for (int i = 0; i < points; ++i) {
      const double t = -std::numbers::pi + (i + 0.5) * h;
      if (!std::isfinite(f_(t))) {
        throw InvalidInput("function '" + description_ + "' is not finite at t = " +
                           std::to_string(t));
      }
    }
  }

  Evaluator f_;
  std::string description_;
  std::vector<double> jumps_;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite Simpson rule on [lo, hi] with about `intervals` subintervals,
/// split at every break strictly inside the interval. Each piece gets an
/// even share proportional to its length; piece endpoints are moved inward by
/// 1e-9 of a step so that evaluation picks up one-sided limits at jumps. A
/// single ulp is not enough once the node passes through a change of variable.
inline QuadratureRule simpson_rule(double lo, double hi, std::size_t intervals,
                                   std::span<const double> breaks = {}) {
  if (!(lo < hi)) throw InvalidInput("simpson_rule: empty interval");
  std::vector<double> cuts{lo};
  for (double b : breaks) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(hi);

  QuadratureRule rule;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double x0 = cuts[s];
    const double x1 = cuts[s + 1];
    auto m = static_cast<std::size_t>(
        std::ceil(static_cast<double>(intervals) * (x1 - x0) / (hi - lo)));
    m = std::max<std::size_t>(2, m + (m % 2));
    const double h = (x1 - x0) / static_cast<double>(m);
    const double nudge = 1e-9 * h;
    for (std::size_t i = 0; i <= m; ++i) {
      double x = x0 + static_cast<double>(i) * h;
      if (i == 0) x = x0 + nudge;
      if (i == m) x = x1 - nudge;
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      rule.nodes.push_back(x);
      rule.weights.push_back(w * h / 3.0);
    }
  }
  return rule;
}

template <class F>
double integrate(const F& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

/// Cosine and sine coefficients for n = 1..N (indexed from 1); a0 is kept
/// apart since the series is taken without its constant term.
struct FourierCoefficients {
  SequencePrefix a;
  SequencePrefix b;
  double a0 = 0.0;
  /// max |full - half-grid| / 15 over all coefficients, or 0 when skipped.
  double error_estimate = 0.0;
};

namespace detail {

inline void accumulate_coefficients(const PeriodicFunction& f, const QuadratureRule& rule,
                                    std::size_t N, std::vector<double>& a,
                                    std::vector<double>& b, double& a0) {
  a.assign(N, 0.0);
  b.assign(N, 0.0);
  a0 = 0.0;
  constexpr std::size_t resync = 64;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double t = rule.nodes[j];
    const double wf = rule.weights[j] * f(t);
    if (wf == 0.0) continue;
    a0 += wf;
    const double c1 = std::cos(t);
    const double s1 = std::sin(t);
    double c = c1;
    double s = s1;
    for (std::size_t n = 1; n <= N; ++n) {
      if (n % resync == 0) {
        c = std::cos(static_cast<double>(n) * t);
        s = std::sin(static_cast<double>(n) * t);
      }
      a[n - 1] += wf * c;
      b[n - 1] += wf * s;
      const double cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
    }
  }
  const double inv_pi = 1.0 / std::numbers::pi;
  for (std::size_t n = 0; n < N; ++n) {
    a[n] *= inv_pi;
    b[n] *= inv_pi;
  }
  a0 *= inv_pi;
}

}  // namespace detail

/// a_n = (1/π)∫ f cos nt, b_n = (1/π)∫ f sin nt over (-π, π] by composite
/// Simpson. Requires quadrature_points >= 8N. With `cross_check`, the half
/// grid is also evaluated and the Richardson difference reported.
inline FourierCoefficients fourier_coefficients(const PeriodicFunction& f, std::size_t N,
                                                std::size_t quadrature_points,
                                                bool cross_check = true) {
  if (N == 0) throw InvalidInput("fourier_coefficients: N must be positive");
  if (quadrature_points < 8 * N) {
    throw InvalidInput("fourier_coefficients: " + std::to_string(quadrature_points) +
                       " quadrature points is below the required minimum " +
                       std::to_string(8 * N));
  }
  const double pi = std::numbers::pi;
  std::vector<double> a, b;
  FourierCoefficients out;
  detail::accumulate_coefficients(f, simpson_rule(-pi, pi, quadrature_points, f.jumps()), N, a,
                                  b, out.a0);
  if (cross_check) {
    std::vector<double> ah, bh;
    double a0h = 0.0;
    detail::accumulate_coefficients(f, simpson_rule(-pi, pi, quadrature_points / 2, f.jumps()),
                                    N, ah, bh, a0h);
    double worst = std::abs(out.a0 - a0h);
    for (std::size_t n = 0; n < N; ++n) {
      worst = std::max({worst, std::abs(a[n] - ah[n]), std::abs(b[n] - bh[n])});
    }
    out.error_estimate = worst / 15.0;
  }
  out.a = SequencePrefix(std::move(a), IndexBase::one);
  out.b = SequencePrefix(std::move(b), IndexBase::one);
  return out;
}

/// Coefficients and the terms C_n(x) = a_n cos nx + b_n sin nx (from n = 1).
struct FourierData {
  SequencePrefix a;
  SequencePrefix b;
  double x = 0.0;
  SequencePrefix C;
};

inline FourierData fourier_terms(const FourierCoefficients& coeffs, double x) {
  std::vector<double> C(coeffs.a.size());
  for (Index n = 1; n < coeffs.a.end_index(); ++n) {
    const double nx = static_cast<double>(n) * x;
    C[static_cast<std::size_t>(n - 1)] = coeffs.a[n] * std::cos(nx) + coeffs.b[n] * std::sin(nx);
  }
  return {coeffs.a, coeffs.b, x, SequencePrefix(std::move(C), IndexBase::one)};
}

/// φ(t) = (f(x+t) + f(x-t))/2.
inline PeriodicFunction phi(const PeriodicFunction& f, double x) {
  std::vector<double> jumps;
  for (double j : f.jumps()) {
    for (double c : {reduce_angle(j - x), reduce_angle(x - j)}) {
      jumps.push_back(c);
      jumps.push_back(-c);
    }
  }
  return PeriodicFunction([f, x](double t) { return 0.5 * (f(x + t) + f(x - t)); },
                          "phi[" + f.description() + ", x=" + std::to_string(x) + "]",
                          std::move(jumps));
}

/// φ_α(t) = (α/t^α) ∫_0^t (t-u)^{α-1} φ(u) du for 0 < t <= π.
///
/// Evaluated after a substitution that removes the kernel singularity:
/// α >= 1:  ∫_0^1 φ(t(1-s)) α s^{α-1} ds;
/// α < 1:   ∫_0^1 φ(t(1 - r^{1/α})) dr.
inline double phi_alpha(const PeriodicFunction& phi_fn, double alpha, double t,
                        std::size_t quadrature_points = 4096) {
  if (!(alpha > 0.0)) throw DomainError("phi_alpha: order must be positive");
  if (!(t > 0.0) || t > std::numbers::pi) {
    throw DomainError("phi_alpha: t must lie in (0, pi], got " + std::to_string(t));
  }
  std::vector<double> breaks;
  for (double j : phi_fn.jumps()) {
    if (j > 0.0 && j < t) {
      const double s = 1.0 - j / t;
      breaks.push_back(alpha >= 1.0 ? s : std::pow(s, alpha));
    }
  }
  const QuadratureRule rule = simpson_rule(0.0, 1.0, quadrature_points, breaks);
  if (alpha >= 1.0) {
    return integrate(
        [&](double s) { return phi_fn(t * (1.0 - s)) * alpha * std::pow(s, alpha - 1.0); },
        rule);
  }
  return integrate([&](double r) { return phi_fn(t * (1.0 - std::pow(r, 1.0 / alpha))); },
                   rule);
}

/// t ↦ φ_1(t) on (0, π], extended evenly.
inline PeriodicFunction phi_one(const PeriodicFunction& phi_fn,
                                std::size_t quadrature_points = 1024) {
  return PeriodicFunction(
      [phi_fn, quadrature_points](double t) {
        const double at = std::abs(t);
        if (at == 0.0) return phi_fn(std::nextafter(0.0, 1.0));
        return phi_alpha(phi_fn, 1.0, at, quadrature_points);
      },
      "phi_1[" + phi_fn.description() + "]");
}

/// z_n(x) = (1/(n+1)) Σ_{v=1..n} v C_v(x), for C indexed from 1.
inline SequencePrefix z_mean(const SequencePrefix& C) {
  if (C.empty()) throw InvalidInput("z_mean: empty input");
  if (C.base() != IndexBase::one) throw InvalidInput("z_mean: C must be indexed from 1");
  std::vector<double> z(C.size());
  double acc = 0.0;
  for (Index n = 1; n < C.end_index(); ++n) {
    acc += static_cast<double>(n) * C[n];
    z[static_cast<std::size_t>(n - 1)] = acc / static_cast<double>(n + 1);
  }
  return SequencePrefix(std::move(z), IndexBase::one);
}

/// Total variation of g sampled at the midpoints of `grid_points` uniform
/// cells of (lo, hi).
template <class G>
double bv_estimate(const G& g, double lo, double hi, std::size_t grid_points) {
  if (!(lo < hi)) throw InvalidInput("bv_estimate: need lo < hi");
  if (grid_points < 64) throw InvalidInput("bv_estimate: grid_points must be >= 64");
  const double h = (hi - lo) / static_cast<double>(grid_points);
  double prev = g(lo + 0.5 * h);
  double tv = 0.0;
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double cur = g(lo + (static_cast<double>(i) + 0.5) * h);
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv;
}

/// Variation estimates under dyadic refinement of the grid.
struct BvProfile {
  std::vector<std::size_t> grids;
  std::vector<double> variations;
  /// Last refinement changed the estimate by at most the stabilization knob.
  bool stabilized = false;
};

template <class G>
BvProfile bv_profile(const G& g, double lo, double hi, std::size_t min_grid = 64,
                     std::size_t max_grid = 8192, const Thresholds& thr = {}) {
  if (min_grid < 64 || max_grid < 2 * min_grid) {
    throw InvalidInput("bv_profile: need 64 <= min_grid and at least two levels");
  }
  BvProfile p;
  for (std::size_t grid = min_grid; grid <= max_grid; grid *= 2) {
    p.grids.push_back(grid);
    p.variations.push_back(bv_estimate(g, lo, hi, grid));
  }
  const double last = p.variations.back();
  const double prev = p.variations[p.variations.size() - 2];
  p.stabilized = std::abs(last - prev) <= thr.bv_stabilization * std::abs(last) + 1e-12;
  return p;
}

namespace detail {

inline std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("bad number '" + item + "' in '" + key + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Built-in functions: "zero", "sawtooth" (t), "square" (sign t), "abs" (|t|),
/// "sine:m", "cosine:m", "polyjump:c0,c1,..." (Σ c_i t^i with the periodic
/// jump at ±π).
inline PeriodicFunction named_function(const std::string& key) {
  const auto colon = key.find(':');
  const std::string name = key.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : key.substr(colon + 1);
  const double pi = std::numbers::pi;
  auto harmonic = [&]() {
    const auto values = detail::parse_number_list(arg, key);
    if (values.size() != 1 || values[0] != std::floor(values[0]) || values[0] < 1.0) {
      throw InvalidInput("'" + key + "' needs a positive integer frequency");
    }
    return values[0];
  };
  if (name == "zero") return PeriodicFunction([](double) { return 0.0; }, key);
  if (name == "sawtooth") return PeriodicFunction([](double t) { return t; }, key, {pi});
  if (name == "square") {
    return PeriodicFunction(
        [](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }, key, {0.0, pi});
  }
  if (name == "abs") return PeriodicFunction([](double t) { return std::abs(t); }, key);
  if (name == "sine") {
    const double m = harmonic();
    return PeriodicFunction([m](double t) { return std::sin(m * t); }, key);
  }
  if (name == "cosine") {
    const double m = harmonic();
    return PeriodicFunction([m](double t) { return std::cos(m * t); }, key);
  }
  if (name == "polyjump") {
    const auto c = detail::parse_number_list(arg, key);
    return PeriodicFunction(
        [c](double t) {
          double acc = 0.0;
          for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
          return acc;
        },
        key, {pi});
  }
  throw InvalidInput("unknown function '" + key + "'");
}

/// Linear interpolation through (t_i, f_i) samples on (-π, π]; constant
/// beyond the first and last sample.
inline PeriodicFunction tabulated_function(std::vector<std::pair<double, double>> samples,
                                           std::string description = "tabulated") {
  if (samples.size() < 2) throw InvalidInput("tabulated function needs >= 2 samples");
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [t, v] = samples[i];
    if (!std::isfinite(t) || !std::isfinite(v)) throw InvalidInput("non-finite sample");
    if (t < -std::numbers::pi || t > std::numbers::pi) {
      throw InvalidInput("sample abscissa " + std::to_string(t) + " outside [-pi, pi]");
    }
    if (i > 0 && samples[i - 1].first == t) throw InvalidInput("duplicate sample abscissa");
  }
  std::vector<double> jumps;
  if (samples.front().second != samples.back().second) jumps.push_back(std::numbers::pi);
  return PeriodicFunction(
      [s = std::move(samples)](double t) {
        if (t <= s.front().first) return s.front().second;
        if (t >= s.back().first) return s.back().second;
        auto hi = std::upper_bound(s.begin(), s.end(), std::make_pair(t, -HUGE_VAL));
        auto lo = hi - 1;
        const double w = (t - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
      },
      std::move(description), std::move(jumps));
}

}  // namespace summatrix

#endif  // SUMMATRIX_FOURIER_HPP

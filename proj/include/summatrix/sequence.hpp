#ifndef SUMMATRIX_SEQUENCE_HPP
#define SUMMATRIX_SEQUENCE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "summatrix/report.hpp"
#include "summatrix/types.hpp"

namespace summatrix {

/// (Δs)_n = s_n - s_{n+1}; one entry shorter, same base.
inline SequencePrefix forward_difference(const SequencePrefix& s) {
  if (s.size() < 2) {
    throw InvalidInput("forward_difference needs at least 2 entries");
  }
  const auto& v = s.data();
  std::vector<double> d(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) d[i] = v[i] - v[i + 1];
  return SequencePrefix(std::move(d), s.base());
}

inline SequencePrefix partial_sums(const SequencePrefix& s) {
  std::vector<double> out(s.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc += s.data()[i];
    out[i] = acc;
  }
  return SequencePrefix(std::move(out), s.base());
}

/// Σ |Δs_n| over the prefix.
inline double total_variation(const SequencePrefix& s) {
  if (s.size() < 2) {
    throw InvalidInput("total_variation needs at least 2 entries");
  }
  double tv = 0.0;
  const auto& v = s.data();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i] - v[i + 1]);
  return tv;
}

/// Positive weights p_n (from n = 0), their partial sums P_n and
/// X_n = Σ_{v=1..n} p_v / P_v (from n = 1).
struct WeightSystem {
  SequencePrefix p;
  SequencePrefix P;
  SequencePrefix X;

  std::size_t size() const noexcept { return p.size(); }
};

inline WeightSystem build_weight_system(const SequencePrefix& p) {
  if (p.base() != IndexBase::zero) {
    throw InvalidInput("weights must be indexed from 0");
  }
  if (p.empty()) throw InvalidInput("weights must be nonempty");
  for (Index n = 0; n < p.end_index(); ++n) {
    if (!(p[n] > 0.0)) {
      throw DomainError("weight p_" + std::to_string(n) +
                        " is not positive (" + std::to_string(p[n]) + ")");
    }
  }
  SequencePrefix P = partial_sums(p);
  std::vector<double> x;
  x.reserve(p.size() > 0 ? p.size() - 1 : 0);
  double acc = 0.0;
  for (Index n = 1; n < p.end_index(); ++n) {
    acc += p[n] / P[n];
    x.push_back(acc);
  }
  return {p, std::move(P), SequencePrefix(std::move(x), IndexBase::one)};
}

/// Summability factor λ_n with its δ-quasi-monotone companion A_n and the
/// tolerance sequence δ_n. All three are indexed from 1.
struct FactorProfile {
  SequencePrefix lambda;
  SequencePrefix companion;
  SequencePrefix delta;

  std::size_t size() const noexcept { return lambda.size(); }
};

inline FactorProfile make_factor_profile(SequencePrefix lambda,
                                         SequencePrefix companion,
                                         SequencePrefix delta) {
  if (lambda.size() != companion.size() || lambda.size() != delta.size()) {
    throw InvalidInput("factor profile sequences must have equal lengths");
  }
  if (lambda.base() != companion.base() || lambda.base() != delta.base()) {
    throw InvalidInput("factor profile sequences must share an index base");
  }
  for (double d : delta) {
    if (d < 0.0) throw DomainError("delta entries must be nonnegative");
  }
  return {std::move(lambda), std::move(companion), std::move(delta)};
}

/// Empirical δ-quasi-monotonicity of d.
///
/// Clause (i):  Δd_n >= -δ_n wherever both sides are defined.
/// Clause (ii): d_n > 0 on the final `tail_fraction` of the prefix.
/// Clause (iii): max |d_n| over the final decay window is at most
///   decay_ratio times the max over the rest of the prefix (proxy for d_n -> 0).
inline CheckReport check_quasi_monotone(const SequencePrefix& d,
                                        const SequencePrefix& delta,
                                        double tail_fraction,
                                        const Thresholds& thr = {}) {
  if (d.size() < 2) throw InvalidInput("check_quasi_monotone needs >= 2 entries");
  if (delta.base() != d.base() || delta.size() + 1 < d.size()) {
    throw InvalidInput("delta must share the base of d and cover its differences");
  }
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw InvalidInput("tail_fraction must lie in (0, 1)");
  }
  for (double x : delta) {
    if (x < 0.0) throw InvalidInput("delta entries must be nonnegative");
  }

  CheckReport r;
  r.id = "quasi_monotone";
  r.kind = CheckKind::asymptotic;
  const Index first = d.first_index();
  const Index end = d.end_index();
  const auto n_total = static_cast<double>(d.size());

  std::optional<Index> diff_violation;
  for (Index n = first; n + 1 < end; ++n) {
    if (d[n] - d[n + 1] < -delta[n]) {
      diff_violation = n;
      break;
    }
  }

  const Index cutoff =
      first + static_cast<Index>(std::floor((1.0 - tail_fraction) * n_total));
  std::optional<Index> sign_violation;
  for (Index n = cutoff; n < end; ++n) {
    if (!(d[n] > 0.0)) {
      sign_violation = n;
      break;
    }
  }

  const auto window = std::max<Index>(
      1, static_cast<Index>(std::ceil(thr.decay_window_fraction * n_total)));
  const Index tail_start = std::max(first + 1, end - window);
  double head_max = 0.0;
  double tail_max = 0.0;
  for (Index n = first; n < tail_start; ++n) head_max = std::max(head_max, std::abs(d[n]));
  for (Index n = tail_start; n < end; ++n) tail_max = std::max(tail_max, std::abs(d[n]));
  std::optional<Index> decay_violation;
  if (tail_max > thr.decay_ratio * head_max) {
    for (Index n = tail_start; n < end; ++n) {
      if (std::abs(d[n]) > thr.decay_ratio * head_max) {
        decay_violation = n;
        break;
      }
    }
  }

  r.thresholds = {{"positivity_tail_fraction", tail_fraction},
                  {"positivity_cutoff_index", static_cast<double>(cutoff)},
                  {"decay_window_fraction", thr.decay_window_fraction},
                  {"decay_ratio", thr.decay_ratio}};
  r.notes.push_back("'ultimately positive' checked from index " +
                    std::to_string(cutoff) + " on");
  r.notes.push_back("decay: tail max " + std::to_string(tail_max) +
                    " vs head max " + std::to_string(head_max));

  if (diff_violation) {
    r.notes.push_back("clause (i) Δd_n >= -δ_n fails first at n = " +
                      std::to_string(*diff_violation));
  }
  if (sign_violation) {
    r.notes.push_back("clause (ii) d_n > 0 ultimately fails first at n = " +
                      std::to_string(*sign_violation));
  }
  if (decay_violation) {
    r.notes.push_back("clause (iii) d_n -> 0 proxy fails first at n = " +
                      std::to_string(*decay_violation));
  }

  if (!diff_violation && !sign_violation && !decay_violation) {
    r.verdict = Verdict::pass;
    return r;
  }
  r.verdict = Verdict::fail;
  if (diff_violation) {
    r.kind = CheckKind::pointwise;
    r.first_violation = diff_violation;
  } else {
    r.first_violation = std::min(sign_violation.value_or(end),
                                 decay_violation.value_or(end));
  }
  return r;
}

/// Built-in sequence generators selected by key: "zero", "ones",
/// "harmonic" (1/(n+1)), "reciprocal" (1/n), "alternating" ((-1)^n),
/// "geometric:r" (r^n), "power:e" ((n+1)^e).
inline Generator named_generator(const std::string& key) {
  const auto colon = key.find(':');
  const std::string name = key.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : key.substr(colon + 1);
  auto parameter = [&]() {
    if (arg.empty()) throw InvalidInput("generator '" + name + "' needs a parameter");
    try {
      std::size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::exception&) {
      throw InvalidInput("bad parameter '" + arg + "' for generator '" + name + "'");
    }
  };
  if (name == "zero") return [](Index) { return 0.0; };
  if (name == "ones") return [](Index) { return 1.0; };
  if (name == "harmonic") return [](Index n) { return 1.0 / static_cast<double>(n + 1); };
  if (name == "reciprocal") {
    return [](Index n) {
      if (n == 0) throw DomainError("reciprocal generator undefined at n = 0");
      return 1.0 / static_cast<double>(n);
    };
  }
  if (name == "alternating") return [](Index n) { return n % 2 == 0 ? 1.0 : -1.0; };
  if (name == "geometric") {
    const double r = parameter();
    return [r](Index n) { return std::pow(r, static_cast<double>(n)); };
  }
  if (name == "power") {
    const double e = parameter();
    return [e](Index n) { return std::pow(static_cast<double>(n + 1), e); };
  }
  throw InvalidInput("unknown sequence generator '" + key + "'");
}

}  // namespace summatrix

#endif  // SUMMATRIX_SEQUENCE_HPP

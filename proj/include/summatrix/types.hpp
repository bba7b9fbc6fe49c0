#ifndef SUMMATRIX_TYPES_HPP
#define SUMMATRIX_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace summatrix {

using Index = std::int64_t;

/// Raised when an argument violates a structural precondition
/// (lengths, dimensions, resolutions, malformed input).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an argument is outside the mathematical domain of an operation
/// (nonpositive weights, Cesaro order <= -1, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class IndexBase : int { zero = 0, one = 1 };

/// Maps a logical index n to a value; used to extend prefixes on demand.
using Generator = std::function<double(Index)>;

/// Finite prefix of a real sequence. Entries are addressed by their logical
/// index, which starts at 0 or 1 depending on the recorded base.
class SequencePrefix {
 public:
  SequencePrefix() = default;

  explicit SequencePrefix(std::vector<double> values,
                          IndexBase base = IndexBase::zero)
      : values_(std::move(values)), base_(base) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw InvalidInput("sequence entry at index " +
                           std::to_string(static_cast<Index>(i) + first_index()) +
                           " is not finite");
      }
    }
  }

  static SequencePrefix generate(const Generator& gen, std::size_t length,
                                 IndexBase base = IndexBase::zero) {
    std::vector<double> v(length);
    const Index first = static_cast<Index>(base);
    for (std::size_t i = 0; i < length; ++i) {
      v[i] = gen(first + static_cast<Index>(i));
    }
    return SequencePrefix(std::move(v), base);
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  IndexBase base() const noexcept { return base_; }
  Index first_index() const noexcept { return static_cast<Index>(base_); }
  /// One past the last logical index.
  Index end_index() const noexcept {
    return first_index() + static_cast<Index>(values_.size());
  }
  bool contains(Index n) const noexcept {
    return n >= first_index() && n < end_index();
  }

  double operator[](Index n) const noexcept {
    return values_[static_cast<std::size_t>(n - first_index())];
  }

  double at(Index n) const {
    if (!contains(n)) {
      throw InvalidInput("index " + std::to_string(n) +
                         " outside sequence prefix [" +
                         std::to_string(first_index()) + ", " +
                         std::to_string(end_index()) + ")");
    }
    return (*this)[n];
  }

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Prefix of the first `length` entries.
  SequencePrefix head(std::size_t length) const {
    if (length > values_.size()) {
      throw InvalidInput("head length " + std::to_string(length) +
                         " exceeds prefix length " +
                         std::to_string(values_.size()));
    }
    return SequencePrefix(
        std::vector<double>(values_.begin(),
                            values_.begin() + static_cast<std::ptrdiff_t>(length)),
        base_);
  }

  friend bool operator==(const SequencePrefix&, const SequencePrefix&) = default;

 private:
  std::vector<double> values_;
  IndexBase base_ = IndexBase::zero;
};

/// Appends generated entries until the prefix reaches `length`.
inline SequencePrefix extend(const SequencePrefix& s, const Generator& gen,
                             std::size_t length) {
  std::vector<double> v = s.data();
  for (Index n = s.end_index(); static_cast<std::size_t>(n - s.first_index()) < length; ++n) {
    v.push_back(gen(n));
  }
  return SequencePrefix(std::move(v), s.base());
}

}  // namespace summatrix

#endif  // SUMMATRIX_TYPES_HPP

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "glcf/error.hpp"

namespace glcf {

/// 1-based matrix/sequence index.
using Index = std::int64_t;

/// Largest prefix or period a descriptor may grow to before an operation is
/// refused as outside the supported fragment.
inline constexpr std::size_t kMaxDescriptorLength = std::size_t{1} << 20;

/// An infinite sequence t(1), t(2), ... given by a finite prefix followed by
/// a repeating period. Always stored canonically: minimal period length, then
/// minimal prefix length. Two descriptors denote the same sequence iff they
/// compare equal.
template <class T>
class EventuallyPeriodic {
 public:
  using const_reference = typename std::vector<T>::const_reference;

  EventuallyPeriodic() = default;

  EventuallyPeriodic(std::vector<T> prefix, std::vector<T> period)
      : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw Error(Errc::InvalidArgument, "period must be nonempty");
    canonicalize();
  }

  static EventuallyPeriodic constant(T value) { return EventuallyPeriodic({}, {std::move(value)}); }

  /// Builds the sequence i -> gen(i) whose behaviour is known to be periodic
  /// with period `period` from index `start` + 1 on.
  template <class Gen>
  static EventuallyPeriodic generate(std::size_t start, std::size_t period, Gen&& gen) {
    check_length(start);
    check_length(period);
    std::vector<T> pre, per;
    pre.reserve(start);
    per.reserve(period);
    for (std::size_t i = 1; i <= start; ++i) pre.push_back(gen(static_cast<Index>(i)));
    for (std::size_t i = start + 1; i <= start + period; ++i) per.push_back(gen(static_cast<Index>(i)));
    return EventuallyPeriodic(std::move(pre), std::move(per));
  }

  const std::vector<T>& prefix() const noexcept { return prefix_; }
  const std::vector<T>& period() const noexcept { return period_; }
  std::size_t prefix_length() const noexcept { return prefix_.size(); }
  std::size_t period_length() const noexcept { return period_.size(); }

  /// Value at a 1-based index (indices below 1 are invalid).
  const_reference at(Index i) const {
    if (i < 1) throw Error(Errc::InvalidArgument, "sequence index " + std::to_string(i) + " < 1");
    auto u = static_cast<std::size_t>(i);
    if (u <= prefix_.size()) return prefix_[u - 1];
    return period_[(u - prefix_.size() - 1) % period_.size()];
  }

  /// Value of the purely periodic two-sided extension of the period at any
  /// index (agrees with at() beyond the prefix).
  const_reference periodic_at(Index i) const {
    auto p = static_cast<Index>(period_.size());
    Index off = (i - static_cast<Index>(prefix_.size()) - 1) % p;
    if (off < 0) off += p;
    return period_[static_cast<std::size_t>(off)];
  }

  /// The purely periodic sequence agreeing with this one eventually.
  EventuallyPeriodic periodic_part() const {
    std::vector<T> per(period_.size());
    for (std::size_t k = 0; k < per.size(); ++k) per[k] = periodic_at(static_cast<Index>(k) + 1);
    return EventuallyPeriodic({}, std::move(per));
  }

  bool is_eventually_constant() const noexcept { return period_.size() == 1; }
  bool is_constant() const noexcept { return prefix_.empty() && period_.size() == 1; }

  /// t'(i) = t(i + k); indices that fall below 1 read `fill`.
  EventuallyPeriodic shifted(Index k, const T& fill) const {
    std::size_t start = prefix_.size();
    if (k < 0) start += static_cast<std::size_t>(-k);
    else start = prefix_.size() > static_cast<std::size_t>(k) ? prefix_.size() - static_cast<std::size_t>(k) : 0;
    return generate(start, period_.size(), [&](Index i) -> T { return i + k >= 1 ? at(i + k) : fill; });
  }

  /// Pointwise map.
  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    std::vector<U> pre, per;
    pre.reserve(prefix_.size());
    per.reserve(period_.size());
    for (const auto& v : prefix_) pre.push_back(f(v));
    for (const auto& v : period_) per.push_back(f(v));
    return EventuallyPeriodic<U>(std::move(pre), std::move(per));
  }

  /// Pointwise map with the index passed along: f(i, value).
  template <class F>
  EventuallyPeriodic map_indexed(F&& f) const {
    return generate(prefix_.size(), period_.size(), [&](Index i) { return f(i, at(i)); });
  }

  /// Pointwise combination on aligned prefixes and lcm periods.
  template <class U, class F>
  friend auto zip(const EventuallyPeriodic& a, const EventuallyPeriodic<U>& b, F&& f) {
    using R = std::decay_t<decltype(f(std::declval<const T&>(), std::declval<const U&>()))>;
    std::size_t start = std::max(a.prefix_length(), b.prefix_length());
    std::size_t period = std::lcm(a.period_length(), b.period_length());
    check_length(period);
    return EventuallyPeriodic<R>::generate(start, period, [&](Index i) { return f(a.at(i), b.at(i)); });
  }

  /// First index i >= from with pred(t(i)), if one exists.
  template <class Pred>
  std::optional<Index> find_from(Index from, Pred&& pred) const {
    if (from < 1) from = 1;
    Index limit = std::max<Index>(from, static_cast<Index>(prefix_.size())) + static_cast<Index>(period_.size());
    for (Index i = from; i <= limit; ++i) {
      if (pred(at(i))) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const EventuallyPeriodic& a, const EventuallyPeriodic& b) {
    return a.prefix_ == b.prefix_ && a.period_ == b.period_;
  }

  static void check_length(std::size_t n) {
    if (n > kMaxDescriptorLength) {
      throw Error(Errc::NotNormalizable, "descriptor length " + std::to_string(n) + " exceeds supported size");
    }
  }

 private:
  void canonicalize() {
    // Minimal period: the smallest divisor d of the length with t[k] == t[k+d].
    std::size_t n = period_.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      bool ok = true;
      for (std::size_t k = d; k < n && ok; ++k) ok = period_[k] == period_[k - d];
      if (ok) {
        period_.resize(d);
        break;
      }
    }
    // Minimal prefix: absorb trailing prefix entries into a rotated period.
    while (!prefix_.empty() && prefix_.back() == period_.back()) {
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
      prefix_.pop_back();
    }
  }

  std::vector<T> prefix_;
  std::vector<T> period_{T{}};
};

}  // namespace glcf

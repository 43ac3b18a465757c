#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glcf/field.hpp"
#include "glcf/periodic.hpp"

namespace glcf {

/// Decidable description of a sequence N -> K. Finite support, eventually
/// constant and eventually periodic sequences share one canonical
/// prefix/period representation; kind() reports which class the value is in.
class SeqDesc {
 public:
  enum class Kind { FiniteSupport, EventuallyConstant, EventuallyPeriodic };
  using Data = EventuallyPeriodic<Scalar>;

  explicit SeqDesc(Field f) : field_(f), data_({}, {Scalar::zero(f)}) {}
  SeqDesc(Field f, Data data) : field_(f), data_(std::move(data)) {
    for (const auto& v : data_.prefix()) require_same_field(f, v.field());
    for (const auto& v : data_.period()) require_same_field(f, v.field());
  }

  static SeqDesc zero(Field f) { return SeqDesc(f); }
  static SeqDesc constant(const Scalar& c) { return SeqDesc(c.field(), Data::constant(c)); }
  static SeqDesc periodic(Field f, std::vector<Scalar> prefix, std::vector<Scalar> period) {
    return SeqDesc(f, Data(std::move(prefix), std::move(period)));
  }
  static SeqDesc finite(Field f, const std::map<Index, Scalar>& entries) {
    Index top = 0;
    for (const auto& [i, v] : entries) {
      if (i < 1) throw Error(Errc::InvalidArgument, "sequence index " + std::to_string(i) + " < 1");
      require_same_field(f, v.field());
      top = std::max(top, i);
    }
    std::vector<Scalar> pre(static_cast<std::size_t>(top), Scalar::zero(f));
    for (const auto& [i, v] : entries) pre[static_cast<std::size_t>(i - 1)] += v;
    return SeqDesc(f, Data(std::move(pre), {Scalar::zero(f)}));
  }
  static SeqDesc unit(Field f, Index i) { return finite(f, {{i, Scalar::one(f)}}); }

  Field field() const noexcept { return field_; }
  const Data& data() const noexcept { return data_; }
  const Scalar& at(Index i) const { return data_.at(i); }

  Kind kind() const {
    if (data_.period_length() != 1) return Kind::EventuallyPeriodic;
    return data_.period().front().is_zero() ? Kind::FiniteSupport : Kind::EventuallyConstant;
  }
  bool is_zero() const { return data_.prefix().empty() && data_.period().front().is_zero() && data_.period_length() == 1; }
  bool has_finite_support() const { return kind() == Kind::FiniteSupport; }
  /// The eventual value, when the sequence is eventually constant.
  std::optional<Scalar> eventual_value() const {
    if (data_.period_length() != 1) return std::nullopt;
    return data_.period().front();
  }

  /// Nonzero entries; only meaningful for finite support.
  std::map<Index, Scalar> finite_entries() const {
    std::map<Index, Scalar> out;
    for (std::size_t k = 0; k < data_.prefix_length(); ++k) {
      if (!data_.prefix()[k].is_zero()) out.emplace(static_cast<Index>(k + 1), data_.prefix()[k]);
    }
    return out;
  }

  SeqDesc periodic_part() const { return SeqDesc(field_, data_.periodic_part()); }
  SeqDesc shifted(Index k) const { return SeqDesc(field_, data_.shifted(k, Scalar::zero(field_))); }
  SeqDesc scaled(const Scalar& c) const {
    require_same_field(field_, c.field());
    return SeqDesc(field_, data_.map([&](const Scalar& v) { return v * c; }));
  }
  /// Zeroes every entry with index <= bound.
  SeqDesc zeroed_through(Index bound) const {
    if (bound < 1) return *this;
    std::size_t start = std::max<std::size_t>(data_.prefix_length(), static_cast<std::size_t>(bound));
    return SeqDesc(field_, Data::generate(start, data_.period_length(), [&](Index i) {
                     return i <= bound ? Scalar::zero(field_) : data_.at(i);
                   }));
  }
  /// Replaces the entry at index i.
  SeqDesc with_entry(Index i, const Scalar& v) const {
    std::size_t start = std::max<std::size_t>(data_.prefix_length(), static_cast<std::size_t>(i));
    return SeqDesc(field_, Data::generate(start, data_.period_length(),
                                          [&](Index k) { return k == i ? v : data_.at(k); }));
  }

  std::optional<Index> first_nonzero(Index from = 1) const {
    return data_.find_from(from, [](const Scalar& v) { return !v.is_zero(); });
  }

  /// Index past which the sequence is purely periodic.
  Index prefix_length() const noexcept { return static_cast<Index>(data_.prefix_length()); }
  Index period_length() const noexcept { return static_cast<Index>(data_.period_length()); }

  friend SeqDesc operator+(const SeqDesc& a, const SeqDesc& b) {
    require_same_field(a.field_, b.field_);
    return SeqDesc(a.field_, zip(a.data_, b.data_, [](const Scalar& x, const Scalar& y) { return x + y; }));
  }
  friend SeqDesc operator-(const SeqDesc& a, const SeqDesc& b) {
    require_same_field(a.field_, b.field_);
    return SeqDesc(a.field_, zip(a.data_, b.data_, [](const Scalar& x, const Scalar& y) { return x - y; }));
  }
  friend SeqDesc operator*(const SeqDesc& a, const SeqDesc& b) {
    require_same_field(a.field_, b.field_);
    return SeqDesc(a.field_, zip(a.data_, b.data_, [](const Scalar& x, const Scalar& y) { return x * y; }));
  }
  SeqDesc operator-() const { return scaled(-Scalar::one(field_)); }

  friend bool operator==(const SeqDesc& a, const SeqDesc& b) { return a.field_ == b.field_ && a.data_ == b.data_; }

 private:
  Field field_;
  Data data_;
};

/// Decidable subset of N: finite, or eventually periodic membership.
class IndexSet {
 public:
  using Bits = EventuallyPeriodic<bool>;

  IndexSet() : bits_({}, {false}) {}
  explicit IndexSet(Bits bits) : bits_(std::move(bits)) {}

  static IndexSet empty() { return IndexSet(); }
  static IndexSet all() { return IndexSet(Bits({}, {true})); }
  static IndexSet periodic(std::vector<bool> prefix, std::vector<bool> period) {
    return IndexSet(Bits(std::move(prefix), std::move(period)));
  }
  static IndexSet finite(const std::set<Index>& members) {
    Index top = members.empty() ? 0 : *members.rbegin();
    if (!members.empty() && *members.begin() < 1) {
      throw Error(Errc::InvalidArgument, "index set member " + std::to_string(*members.begin()) + " < 1");
    }
    Bits::check_length(static_cast<std::size_t>(top));
    std::vector<bool> pre(static_cast<std::size_t>(top), false);
    for (Index i : members) pre[static_cast<std::size_t>(i - 1)] = true;
    return IndexSet(Bits(std::move(pre), {false}));
  }
  /// {i : i >= from}.
  static IndexSet from(Index first) {
    std::vector<bool> pre(static_cast<std::size_t>(std::max<Index>(first - 1, 0)), false);
    return IndexSet(Bits(std::move(pre), {true}));
  }
  /// {i : i >= first, i == first mod step}.
  static IndexSet progression(Index first, Index step) {
    if (first < 1 || step < 1) throw Error(Errc::InvalidArgument, "bad progression");
    std::vector<bool> pre(static_cast<std::size_t>(first - 1), false);
    std::vector<bool> per(static_cast<std::size_t>(step), false);
    per[0] = true;
    return IndexSet(Bits(std::move(pre), std::move(per)));
  }
  /// Support of a sequence.
  static IndexSet support(const SeqDesc& s) {
    return IndexSet(s.data().map([](const Scalar& v) { return !v.is_zero(); }));
  }

  const Bits& bits() const noexcept { return bits_; }

  bool contains(Index i) const { return i >= 1 && bits_.at(i); }
  bool is_infinite() const {
    for (bool b : bits_.period()) {
      if (b) return true;
    }
    return false;
  }
  bool is_empty() const { return !is_infinite() && bits_.prefix().empty(); }
  bool is_all() const { return bits_.prefix().empty() && bits_.period_length() == 1 && bits_.period().front(); }

  IndexSet complement() const { return IndexSet(bits_.map([](bool b) { return !b; })); }
  friend IndexSet operator|(const IndexSet& a, const IndexSet& b) {
    return IndexSet(zip(a.bits_, b.bits_, [](bool x, bool y) { return x || y; }));
  }
  friend IndexSet operator&(const IndexSet& a, const IndexSet& b) {
    return IndexSet(zip(a.bits_, b.bits_, [](bool x, bool y) { return x && y; }));
  }
  friend IndexSet operator-(const IndexSet& a, const IndexSet& b) {
    return IndexSet(zip(a.bits_, b.bits_, [](bool x, bool y) { return x && !y; }));
  }
  /// {i : i + k in this}.
  IndexSet preimage_shift(Index k) const { return IndexSet(bits_.shifted(k, false)); }
  /// {i + k : i in this, i + k >= 1}.
  IndexSet translated(Index k) const { return preimage_shift(-k); }

  /// Indicator sequence scaled by c.
  SeqDesc indicator(const Scalar& c) const {
    Field f = c.field();
    return SeqDesc(f, bits_.map([&](bool b) { return b ? c : Scalar::zero(f); }));
  }

  std::optional<Index> next_member(Index from) const {
    return bits_.find_from(from, [](bool b) { return b; });
  }
  std::vector<Index> members_upto(Index n) const {
    std::vector<Index> out;
    for (Index i = 1; i <= n; ++i) {
      if (bits_.at(i)) out.push_back(i);
    }
    return out;
  }
  /// Members of a finite set.
  std::vector<Index> finite_members() const {
    if (is_infinite()) throw Error(Errc::InvalidArgument, "set is infinite");
    return members_upto(static_cast<Index>(bits_.prefix_length()));
  }
  /// True iff the complement contains no two consecutive naturals.
  bool complement_has_no_adjacent_pair() const {
    IndexSet c = complement();
    IndexSet both = c & c.preimage_shift(1);
    return both.is_empty();
  }

  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.bits_ == b.bits_; }

 private:
  Bits bits_;
};

/// Runs a deterministic transducer over the naturals whose input is
/// eventually periodic past `settled` with period `period` (the caller's step
/// may look back a bounded distance; `settled` must cover that lookback).
/// The output is again eventually periodic; it is detected by watching the
/// automaton state at multiples of the period.
template <class State, class Step>
IndexSet transduce(Index settled, Index period, State state, Step&& step) {
  std::vector<bool> out;
  std::vector<std::pair<State, Index>> seen;
  Index boundary = settled + 1;
  for (Index n = 1;; ++n) {
    if (n >= boundary && (n - boundary) % period == 0) {
      for (const auto& [s, at] : seen) {
        if (s == state) {
          std::vector<bool> pre(out.begin(), out.begin() + (at - 1));
          std::vector<bool> per(out.begin() + (at - 1), out.end());
          return IndexSet::periodic(std::move(pre), std::move(per));
        }
      }
      seen.emplace_back(state, n);
    }
    out.push_back(step(state, n));
    EventuallyPeriodic<bool>::check_length(out.size());
  }
}

}  // namespace glcf

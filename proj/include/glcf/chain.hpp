#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glcf/matexpr.hpp"

namespace glcf {

/// Reference to an ideal element inside a chain: kSeed or a prior step index.
using StepRef = int;
inline constexpr StepRef kSeed = -1;

struct ChainStep {
  enum class Kind { Bracket, Combination };

  Kind kind = Kind::Bracket;
  // Bracket: result = [lhs, rhs]; the ref marks which operand is an ideal member.
  MatExpr lhs, rhs;
  std::optional<StepRef> lhs_ref, rhs_ref;
  // Combination: result = sum of coeff * value(ref).
  std::vector<std::pair<Scalar, StepRef>> terms;
  MatExpr result;
  std::string note;
};

/// Certificate that `target` lies in the ideal generated by `seed`.
struct BracketChain {
  MatExpr seed;
  std::vector<ChainStep> steps;
  MatExpr target;

  Field field() const { return seed.field(); }

  /// The ideal element a reference points at.
  const MatExpr& value(StepRef r) const {
    if (r == kSeed) return seed;
    return steps.at(static_cast<std::size_t>(r)).result;
  }
  StepRef last() const { return steps.empty() ? kSeed : static_cast<StepRef>(steps.size()) - 1; }
  const MatExpr& final_value() const { return value(last()); }

  StepRef bracket(const MatExpr& lhs, std::optional<StepRef> lref, const MatExpr& rhs, std::optional<StepRef> rref,
                  const MatExpr& result, std::string note) {
    ChainStep s;
    s.kind = ChainStep::Kind::Bracket;
    s.lhs = lhs;
    s.rhs = rhs;
    s.lhs_ref = lref;
    s.rhs_ref = rref;
    s.result = result;
    s.note = std::move(note);
    steps.push_back(std::move(s));
    return last();
  }
  /// [value(ref), rhs].
  StepRef bracket_left(StepRef ref, const MatExpr& rhs, const MatExpr& result, std::string note) {
    return bracket(value(ref), ref, rhs, std::nullopt, result, std::move(note));
  }
  /// [lhs, value(ref)].
  StepRef bracket_right(const MatExpr& lhs, StepRef ref, const MatExpr& result, std::string note) {
    return bracket(lhs, std::nullopt, value(ref), ref, result, std::move(note));
  }
  StepRef combine(std::vector<std::pair<Scalar, StepRef>> terms, const MatExpr& result, std::string note) {
    ChainStep s;
    s.kind = ChainStep::Kind::Combination;
    s.terms = std::move(terms);
    s.result = result;
    s.note = std::move(note);
    steps.push_back(std::move(s));
    return last();
  }

  /// Appends `next`, whose seed is this chain's current final value. Returns
  /// the reference of the new final value.
  StepRef append(const BracketChain& next) {
    StepRef base = last();
    auto offset = static_cast<StepRef>(steps.size());
    auto map = [&](StepRef r) { return r == kSeed ? base : r + offset; };
    for (ChainStep s : next.steps) {
      if (s.lhs_ref) s.lhs_ref = map(*s.lhs_ref);
      if (s.rhs_ref) s.rhs_ref = map(*s.rhs_ref);
      for (auto& t : s.terms) t.second = map(t.second);
      steps.push_back(std::move(s));
    }
    target = next.target;
    return last();
  }
};

struct ChainVerdict {
  bool pass = true;
  std::optional<std::size_t> failed_step;  // steps.size() when the target check fails
  std::optional<std::pair<Index, Index>> entry;
  std::string message;

  explicit operator bool() const noexcept { return pass; }
};

/// Re-evaluates every step on exact depth x depth windows. Column evaluation
/// is exact, so window products need no extra padding.
inline ChainVerdict verify_chain(const BracketChain& c, Index depth) {
  auto fail = [](std::size_t step, std::optional<std::pair<Index, Index>> at, std::string msg) {
    ChainVerdict v;
    v.pass = false;
    v.failed_step = step;
    v.entry = at;
    v.message = std::move(msg);
    return v;
  };
  auto where = [](std::pair<Index, Index> ij) {
    return " at (" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ")";
  };
  Field f = c.seed.field();
  std::vector<DenseBlock> values;
  values.reserve(c.steps.size());
  DenseBlock seed = window(c.seed, depth, depth);
  auto value = [&](StepRef r) -> const DenseBlock& { return r == kSeed ? seed : values[static_cast<std::size_t>(r)]; };

  for (std::size_t k = 0; k < c.steps.size(); ++k) {
    const ChainStep& s = c.steps[k];
    auto valid = [&](StepRef r) { return r == kSeed || (r >= 0 && static_cast<std::size_t>(r) < k); };
    DenseBlock expect(f, depth, depth);
    if (s.kind == ChainStep::Kind::Bracket) {
      if (!s.lhs_ref && !s.rhs_ref) return fail(k, std::nullopt, "no bracket operand belongs to the ideal");
      for (const auto& [ref, operand] : {std::make_pair(s.lhs_ref, &s.lhs), std::make_pair(s.rhs_ref, &s.rhs)}) {
        if (!ref) continue;
        if (!valid(*ref)) return fail(k, std::nullopt, "operand reference " + std::to_string(*ref) + " is not prior");
        DenseBlock op = window(*operand, depth, depth);
        if (auto d = op.first_difference(value(*ref))) {
          return fail(k, d, "operand differs from referenced ideal element" + where(*d));
        }
      }
      expect = window(mat::bracket(s.lhs, s.rhs), depth, depth);
    } else {
      for (const auto& [coef, ref] : s.terms) {
        if (!valid(ref)) return fail(k, std::nullopt, "term reference " + std::to_string(ref) + " is not prior");
        const DenseBlock& v = value(ref);
        for (Index i = 1; i <= depth; ++i) {
          for (Index j = 1; j <= depth; ++j) expect.at(i, j) += coef * v.at(i, j);
        }
      }
    }
    DenseBlock got = window(s.result, depth, depth);
    if (auto d = got.first_difference(expect)) return fail(k, d, "step result differs" + where(*d));
    values.push_back(std::move(got));
  }

  DenseBlock target = window(c.target, depth, depth);
  if (c.steps.empty()) {
    if (target.is_zero()) return ChainVerdict{};
  }
  if (auto d = target.first_difference(value(c.last()))) {
    return fail(c.steps.size(), d, "final value differs from target" + where(*d));
  }
  return ChainVerdict{};
}

}  // namespace glcf

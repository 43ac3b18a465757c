#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "glcf/error.hpp"

namespace glcf {

enum class FieldKind : std::uint8_t { Rational, Prime, Integer };

/// Tag of the ambient coefficient domain: the rationals, a prime field F_p
/// (p < 2^31) or the ring of integers. Integers have no inverses and are only
/// accepted where the algorithms never divide.
class Field {
 public:
  constexpr Field() = default;

  static constexpr Field rationals() { return Field(FieldKind::Rational, 0); }
  static constexpr Field integers() { return Field(FieldKind::Integer, 0); }
  static Field prime(std::uint64_t p) {
    if (p < 2 || p >= (std::uint64_t{1} << 31) || !is_prime(p)) {
      throw Error(Errc::InvalidField, "modulus " + std::to_string(p) + " is not a prime below 2^31");
    }
    return Field(FieldKind::Prime, static_cast<std::uint32_t>(p));
  }

  /// Parses the CLI spelling: "q", "z" or "fp:<p>".
  static Field parse(std::string_view text) {
    if (text == "q") return rationals();
    if (text == "z") return integers();
    if (text.size() > 3 && text.substr(0, 3) == "fp:") {
      std::uint64_t p = 0;
      for (char c : text.substr(3)) {
        if (!std::isdigit(static_cast<unsigned char>(c)) || p > (std::uint64_t{1} << 32)) {
          throw Error(Errc::InvalidField, "bad field spelling '" + std::string(text) + "'");
        }
        p = p * 10 + static_cast<std::uint64_t>(c - '0');
      }
      return prime(p);
    }
    throw Error(Errc::InvalidField, "bad field spelling '" + std::string(text) + "'");
  }

  constexpr FieldKind kind() const noexcept { return kind_; }
  constexpr std::uint32_t modulus() const noexcept { return p_; }
  constexpr bool has_inverses() const noexcept { return kind_ != FieldKind::Integer; }
  constexpr bool is_field() const noexcept { return has_inverses(); }
  constexpr std::uint32_t characteristic() const noexcept { return kind_ == FieldKind::Prime ? p_ : 0; }

  std::string to_string() const {
    switch (kind_) {
      case FieldKind::Rational: return "q";
      case FieldKind::Integer: return "z";
      case FieldKind::Prime: return "fp:" + std::to_string(p_);
    }
    return "?";
  }

  friend constexpr bool operator==(Field a, Field b) noexcept { return a.kind_ == b.kind_ && a.p_ == b.p_; }

 private:
  constexpr Field(FieldKind k, std::uint32_t p) : kind_(k), p_(p) {}

  static bool is_prime(std::uint64_t n) {
    if (n < 4) return n >= 2;
    if (n % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % d == 0) return false;
    }
    return true;
  }

  FieldKind kind_ = FieldKind::Rational;
  std::uint32_t p_ = 0;
};

inline void require_same_field(Field a, Field b) {
  if (!(a == b)) throw Error(Errc::FieldMismatch, a.to_string() + " vs " + b.to_string());
}

/// Exact element of a Field. Rationals are kept in lowest terms with a
/// positive denominator, residues in [0, p-1], integers as rationals with
/// denominator one.
class Scalar {
 public:
  Scalar() : field_(Field::rationals()), value_(mpq_class(0)) {}

  static Scalar zero(Field f) { return from_int(f, 0); }
  static Scalar one(Field f) { return from_int(f, 1); }

  static Scalar from_int(Field f, long v) {
    if (f.kind() == FieldKind::Prime) return Scalar(f, reduce(mpz_class(v), f.modulus()));
    return Scalar(f, mpq_class(v));
  }

  static Scalar from_mpq(Field f, const mpq_class& q) {
    switch (f.kind()) {
      case FieldKind::Rational: {
        mpq_class c = q;
        c.canonicalize();
        return Scalar(f, std::move(c));
      }
      case FieldKind::Integer: {
        mpq_class c = q;
        c.canonicalize();
        if (c.get_den() != 1) throw Error(Errc::NoInverses, "non-integral value " + c.get_str() + " in z");
        return Scalar(f, std::move(c));
      }
      case FieldKind::Prime: {
        std::uint32_t num = reduce(q.get_num(), f.modulus());
        std::uint32_t den = reduce(q.get_den(), f.modulus());
        if (den == 0) throw Error(Errc::DivisionByZero, "denominator vanishes mod " + std::to_string(f.modulus()));
        return Scalar(f, mul_mod(num, inv_mod(den, f.modulus()), f.modulus()));
      }
    }
    return Scalar();
  }

  /// Parses "n", "n/d", with optional sign, or "k mod p" (p must match the field).
  static Scalar parse(std::string_view text, Field f) {
    std::string s;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (auto pos = s.find("mod"); pos != std::string::npos) {
      std::string mod = s.substr(pos + 3);
      if (f.kind() != FieldKind::Prime || mod != std::to_string(f.modulus())) {
        throw Error(Errc::FieldMismatch, "literal '" + std::string(text) + "' outside field " + f.to_string());
      }
      s = s.substr(0, pos);
    }
    mpq_class q;
    if (auto slash = s.find('/'); slash != std::string::npos && s.find_first_not_of('0', slash + 1) == std::string::npos &&
                                  slash + 1 < s.size()) {
      throw Error(Errc::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
    }
    if (s.empty() || q.set_str(s, 10) != 0) throw Error(Errc::ParseError, "bad scalar literal '" + std::string(text) + "'");
    q.canonicalize();
    return from_mpq(f, q);
  }

  Field field() const noexcept { return field_; }

  bool is_zero() const {
    if (auto r = std::get_if<std::uint32_t>(&value_)) return *r == 0;
    return sgn(std::get<mpq_class>(value_)) == 0;
  }
  bool is_one() const {
    if (auto r = std::get_if<std::uint32_t>(&value_)) return *r == 1;
    return std::get<mpq_class>(value_) == 1;
  }
  bool is_unit() const {
    if (field_.has_inverses()) return !is_zero();
    const auto& q = std::get<mpq_class>(value_);
    return q == 1 || q == -1;
  }

  const mpq_class& rational() const { return std::get<mpq_class>(value_); }
  std::uint32_t residue() const { return std::get<std::uint32_t>(value_); }

  Scalar inv() const {
    if (is_zero()) throw Error(Errc::DivisionByZero, "inversion of zero in " + field_.to_string());
    if (auto r = std::get_if<std::uint32_t>(&value_)) return Scalar(field_, inv_mod(*r, field_.modulus()));
    if (!field_.has_inverses() && !is_unit()) {
      throw Error(Errc::NoInverses, to_string() + " has no inverse in z");
    }
    return Scalar(field_, mpq_class(1) / rational());
  }

  Scalar operator-() const {
    if (auto r = std::get_if<std::uint32_t>(&value_)) return Scalar(field_, *r == 0 ? 0u : field_.modulus() - *r);
    return Scalar(field_, mpq_class(-rational()));
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same_field(a.field_, b.field_);
    if (a.field_.kind() == FieldKind::Prime) {
      std::uint64_t s = std::uint64_t{a.residue()} + b.residue();
      if (s >= a.field_.modulus()) s -= a.field_.modulus();
      return Scalar(a.field_, static_cast<std::uint32_t>(s));
    }
    return Scalar(a.field_, mpq_class(a.rational() + b.rational()));
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same_field(a.field_, b.field_);
    if (a.field_.kind() == FieldKind::Prime) {
      return Scalar(a.field_, mul_mod(a.residue(), b.residue(), a.field_.modulus()));
    }
    return Scalar(a.field_, mpq_class(a.rational() * b.rational()));
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (!(a.field_ == b.field_)) return false;
    return a.value_ == b.value_;
  }

  /// "n/d" (or "n") for rationals and integers, "k mod p" for residues.
  std::string to_string() const {
    if (auto r = std::get_if<std::uint32_t>(&value_)) {
      return std::to_string(*r) + " mod " + std::to_string(field_.modulus());
    }
    return rational().get_str();
  }

 private:
  Scalar(Field f, mpq_class q) : field_(f), value_(std::move(q)) {}
  Scalar(Field f, std::uint32_t r) : field_(f), value_(r) {}

  static std::uint32_t reduce(const mpz_class& v, std::uint32_t p) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
    return static_cast<std::uint32_t>(r.get_ui());
  }
  static std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p);
  }
  // Extended Euclid; a must be a nonzero residue.
  static std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
  }

  Field field_;
  std::variant<mpq_class, std::uint32_t> value_;
};

}  // namespace glcf

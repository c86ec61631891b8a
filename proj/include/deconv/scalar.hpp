#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace deconv {

enum class Arithmetic { Exact, Float };

std::string_view to_string(Arithmetic mode);
Arithmetic parse_arithmetic(std::string_view text);

/// A number that is either an exact rational or a binary64 float.
///
/// The mode is fixed when the value is created. Binary operations require
/// both operands to share a mode and throw ModeMismatch otherwise; there is
/// no implicit promotion in either direction.
class Scalar {
 public:
  /// Exact zero.
  Scalar() : value_(mpq_class(0)) {}

  static Scalar exact(const mpq_class& q);
  static Scalar exact(std::int64_t num, std::int64_t den = 1);
  static Scalar real(double x);
  static Scalar zero(Arithmetic mode);
  static Scalar one(Arithmetic mode);
  static Scalar integer(Arithmetic mode, std::int64_t n);

  /// Parses a decimal ("-0.25", "1e-6") or rational ("3/4") literal.
  /// Decimal literals are converted to the exact rational they denote in
  /// exact mode, so "0.6" becomes 3/5 rather than the nearest double.
  static Scalar parse(std::string_view text, Arithmetic mode);

  Arithmetic mode() const noexcept {
    return std::holds_alternative<mpq_class>(value_) ? Arithmetic::Exact
                                                     : Arithmetic::Float;
  }
  bool is_exact() const noexcept { return mode() == Arithmetic::Exact; }

  bool is_zero() const;
  int sign() const;
  double to_double() const;
  /// Exact rational value; throws ModeMismatch for float scalars.
  const mpq_class& rational() const;

  /// Same numeric value re-expressed in another mode. Float to exact
  /// conversion is exact (every finite double is a dyadic rational).
  Scalar as(Arithmetic mode) const;

  Scalar abs() const;
  Scalar pow(unsigned n) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

  /// "p/q" or an integer in exact mode, shortest round-trip decimal in
  /// float mode.
  std::string str() const;

 private:
  explicit Scalar(mpq_class q) : value_(std::move(q)) {}
  explicit Scalar(double x) : value_(x) {}

  void require_same_mode(const Scalar& other) const;

  std::variant<mpq_class, double> value_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace deconv

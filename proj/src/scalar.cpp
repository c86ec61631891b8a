#include "deconv/scalar.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

#include "deconv/errors.hpp"

namespace deconv {

std::string_view to_string(Arithmetic mode) {
  return mode == Arithmetic::Exact ? "exact" : "float";
}

Arithmetic parse_arithmetic(std::string_view text) {
  if (text == "exact") return Arithmetic::Exact;
  if (text == "float") return Arithmetic::Float;
  throw InvalidArgument("unknown arithmetic mode '" + std::string(text) + "'");
}

Scalar Scalar::exact(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return Scalar(std::move(c));
}

Scalar Scalar::exact(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  mpq_class q(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  q.canonicalize();
  return Scalar(std::move(q));
}

Scalar Scalar::real(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite float scalar");
  return Scalar(x);
}

Scalar Scalar::zero(Arithmetic mode) { return integer(mode, 0); }
Scalar Scalar::one(Arithmetic mode) { return integer(mode, 1); }

Scalar Scalar::integer(Arithmetic mode, std::int64_t n) {
  if (mode == Arithmetic::Exact) return exact(n);
  return Scalar(static_cast<double>(n));
}

namespace {

// Decimal literal -> exact rational: [sign] digits [. digits] [e [sign] digits]
mpq_class parse_decimal_exact(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw InvalidArgument("not a number");
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const auto* first = text.data() + i;
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr == first) throw InvalidArgument("bad exponent");
    i = static_cast<std::size_t>(ptr - text.data());
  }
  if (i != text.size()) throw InvalidArgument("trailing characters");

  mpz_class numerator(digits, 10);
  mpz_class scale;
  const long power = exponent - frac_digits;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(power < 0 ? -power : power));
  mpq_class q = power < 0 ? mpq_class(numerator, scale) : mpq_class(numerator * scale);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

}  // namespace

Scalar Scalar::parse(std::string_view text, Arithmetic mode) {
  if (text.empty()) throw InvalidArgument("empty numeric literal");
  try {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      const mpq_class num = parse_decimal_exact(text.substr(0, slash));
      const mpq_class den = parse_decimal_exact(text.substr(slash + 1));
      if (den == 0) throw DivisionByZero("rational literal with zero denominator");
      const Scalar q = exact(num / den);
      return q.as(mode);
    }
    if (mode == Arithmetic::Exact) return exact(parse_decimal_exact(text));
    // Validate syntax with the exact parser, then let from_chars round.
    (void)parse_decimal_exact(text);
    double x = 0.0;
    const auto* first = text.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw InvalidArgument("float literal out of range");
    return real(x);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("invalid numeric literal '" + std::string(text) + "': " + e.what());
  }
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  const double x = std::get<double>(value_);
  return (x > 0) - (x < 0);
}

double Scalar::to_double() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

const mpq_class& Scalar::rational() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
  throw ModeMismatch("rational value requested from a float scalar");
}

Scalar Scalar::as(Arithmetic target) const {
  if (target == mode()) return *this;
  if (target == Arithmetic::Float) return real(to_double());
  return exact(mpq_class(std::get<double>(value_)));
}

Scalar Scalar::abs() const {
  return sign() < 0 ? -*this : *this;
}

Scalar Scalar::pow(unsigned n) const {
  Scalar result = one(mode());
  Scalar base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

void Scalar::require_same_mode(const Scalar& other) const {
  if (mode() != other.mode())
    throw ModeMismatch("arithmetic mode mismatch: " + std::string(to_string(mode())) + " vs " +
                       std::string(to_string(other.mode())));
}

Scalar Scalar::operator-() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return Scalar(mpq_class(-*q));
  return Scalar(-std::get<double>(value_));
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  require_same_mode(rhs);
  if (auto* q = std::get_if<mpq_class>(&value_))
    *q += std::get<mpq_class>(rhs.value_);
  else
    std::get<double>(value_) += std::get<double>(rhs.value_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  require_same_mode(rhs);
  if (auto* q = std::get_if<mpq_class>(&value_))
    *q -= std::get<mpq_class>(rhs.value_);
  else
    std::get<double>(value_) -= std::get<double>(rhs.value_);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  require_same_mode(rhs);
  if (auto* q = std::get_if<mpq_class>(&value_))
    *q *= std::get<mpq_class>(rhs.value_);
  else
    std::get<double>(value_) *= std::get<double>(rhs.value_);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  require_same_mode(rhs);
  if (rhs.is_zero()) throw DivisionByZero("scalar division by zero");
  if (auto* q = std::get_if<mpq_class>(&value_))
    *q /= std::get<mpq_class>(rhs.value_);
  else
    std::get<double>(value_) /= std::get<double>(rhs.value_);
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  a.require_same_mode(b);
  if (const auto* q = std::get_if<mpq_class>(&a.value_)) return *q == std::get<mpq_class>(b.value_);
  return std::get<double>(a.value_) == std::get<double>(b.value_);
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  a.require_same_mode(b);
  if (const auto* q = std::get_if<mpq_class>(&a.value_)) {
    const int c = cmp(*q, std::get<mpq_class>(b.value_));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return std::get<double>(a.value_) <=> std::get<double>(b.value_);
}

std::string Scalar::str() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
  return std::string(buf, ptr);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace deconv

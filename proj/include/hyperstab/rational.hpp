#ifndef HYPERSTAB_RATIONAL_HPP
#define HYPERSTAB_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperstab {

/// Exact rational number. GMP keeps every value canonical (lowest terms,
/// positive denominator) after each arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Accepts "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto check_int = [&](std::string_view part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i >= part.size()) throw bad();
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw bad();
  };
  if (slash == std::string::npos) {
    check_int(s, true);
    return Rational(Integer(s[0] == '+' ? s.substr(1) : s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num, true);
  check_int(den, false);
  Integer d(den);
  if (d == 0) throw bad();
  return make_rational(Integer(num[0] == '+' ? num.substr(1) : num), d);
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

/// Smallest positive multiple of `v` with integer entries of gcd 1.
/// The zero vector is returned unchanged.
inline std::vector<Rational> primitive_integer_vector(std::span<const Rational> v) {
  Integer l = 1;
  for (const auto& x : v) {
    if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  std::vector<Integer> ints;
  ints.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer k = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
    ints.push_back(k);
  }
  std::vector<Rational> out;
  out.reserve(v.size());
  for (auto& k : ints) out.emplace_back(g == 0 ? k : Integer(k / g));
  return out;
}

/// Rational extended by a single top element +infinity. Used for minimal
/// exponents, where smooth points carry the value +infinity.
class ExtRational {
 public:
  ExtRational() : value_(Rational(0)) {}
  ExtRational(const Rational& r) : value_(r) {}  // NOLINT: implicit by design of the arithmetic
  ExtRational(long v) : value_(Rational(v)) {}   // NOLINT

  static ExtRational infinity() {
    ExtRational e;
    e.value_.reset();
    return e;
  }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  const Rational& value() const {
    if (!value_) throw std::logic_error("value() on infinite ExtRational");
    return *value_;
  }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtRational(Rational(*a.value_ + *b.value_));
  }
  ExtRational& operator+=(const ExtRational& o) { return *this = *this + o; }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    if (a.is_infinite()) return std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    int c = cmp(*a.value_, *b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  std::optional<Rational> value_;
};

inline ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }
inline ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

inline std::string to_string(const ExtRational& e) {
  return e.is_infinite() ? std::string("inf") : to_string(e.value());
}

inline ExtRational parse_ext_rational(std::string_view s) {
  if (s == "inf" || s == "+inf") return ExtRational::infinity();
  return ExtRational(parse_rational(s));
}

}  // namespace hyperstab

#endif  // HYPERSTAB_RATIONAL_HPP

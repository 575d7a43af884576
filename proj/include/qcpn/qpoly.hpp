#pragma once

#include <gmpxx.h>

#include <map>
#include <span>
#include <string>
#include <string_view>

namespace qcpn {

using Rational = mpq_class;
using Integer = mpz_class;

/// Element of Q[q, q^-1]. Coefficients are exact rationals keyed by exponent;
/// zero coefficients are never stored, so structural equality is equality.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(long constant);  // NOLINT(google-explicit-constructor)
  explicit LaurentPoly(const Rational& constant);

  static LaurentPoly monomial(const Rational& coefficient, int exponent);
  /// q^exponent
  static LaurentPoly q(int exponent = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::size_t size() const { return terms_.size(); }
  int min_exponent() const;
  int max_exponent() const;
  Rational coefficient(int exponent) const;
  const std::map<int, Rational>& terms() const { return terms_; }

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  LaurentPoly& operator*=(const LaurentPoly& other);
  LaurentPoly operator-() const;
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  /// Multiplies by q^shift.
  LaurentPoly shifted(int shift) const;
  /// The substitution q -> q^-1.
  LaurentPoly inverted() const;

  /// Exact quotient; throws std::domain_error when the remainder is nonzero.
  LaurentPoly divide_exact(const LaurentPoly& divisor) const;

  Rational eval(const Rational& q0) const;
  double eval(double q0) const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ < b.terms_;
  }

  /// Descending exponents, e.g. "q^2 + 1 + q^-2"; "0" for the zero polynomial.
  std::string to_string() const;
  /// Inverse of to_string (whitespace tolerant). Throws std::invalid_argument.
  static LaurentPoly parse(std::string_view text);

 private:
  void add_term(int exponent, const Rational& coefficient);

  std::map<int, Rational> terms_;
};

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p);

/// Symmetric q-integer [n] = (q^n - q^-n) / (q - q^-1).
LaurentPoly qint(int n);
/// [n]! = [n][n-1]...[1], [0]! = 1.
LaurentPoly qfact(int n);
/// [j_0 + ... + j_n]! / ([j_0]! ... [j_n]!).
LaurentPoly qmultinomial(std::span<const int> parts);

/// Parses "3", "-2/5" into a rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

}  // namespace qcpn

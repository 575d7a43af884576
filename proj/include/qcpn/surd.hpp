#pragma once

#include <map>
#include <string>

#include "qcpn/qpoly.hpp"

namespace qcpn {

/// Exact real number sum_s c_s sqrt(s) with rational c_s over distinct
/// squarefree positive integers s. Square roots of distinct squarefree
/// integers are linearly independent over the rationals, so this form is
/// canonical and equality is structural.
class SurdNumber {
 public:
  SurdNumber() = default;
  SurdNumber(long value);  // NOLINT: integers convert implicitly
  explicit SurdNumber(const Rational& value);

  /// sqrt(r) for r >= 0. Throws std::domain_error for negative r, or when the
  /// squarefree part of an integer cannot be determined by trial division.
  static SurdNumber sqrt(const Rational& r);

  const std::map<Integer, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when no irrational square root remains.
  bool is_rational() const;
  double to_double() const;
  std::string to_string() const;

  SurdNumber& operator+=(const SurdNumber& other);
  SurdNumber& operator-=(const SurdNumber& other);
  SurdNumber operator-() const;
  friend SurdNumber operator+(SurdNumber a, const SurdNumber& b) { return a += b; }
  friend SurdNumber operator-(SurdNumber a, const SurdNumber& b) { return a -= b; }
  friend SurdNumber operator*(const SurdNumber& a, const SurdNumber& b);
  friend bool operator==(const SurdNumber& a, const SurdNumber& b) { return a.terms_ == b.terms_; }

 private:
  void add(const Integer& radicand, const Rational& c);

  std::map<Integer, Rational> terms_;
};

/// Writes a positive integer as square * squarefree and returns
/// (root of the square, squarefree part).
std::pair<Integer, Integer> squarefree_split(const Integer& value);

}  // namespace qcpn

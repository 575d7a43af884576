#include "qcpn/qpoly.hpp"

#include <cctype>
#include <cmath>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qcpn {

LaurentPoly::LaurentPoly(long constant) {
  if (constant != 0) terms_.emplace(0, Rational(constant));
}

LaurentPoly::LaurentPoly(const Rational& constant) {
  Rational c = constant;
  c.canonicalize();
  if (c != 0) terms_.emplace(0, std::move(c));
}

LaurentPoly LaurentPoly::monomial(const Rational& coefficient, int exponent) {
  LaurentPoly p;
  Rational c = coefficient;
  c.canonicalize();
  if (c != 0) p.terms_.emplace(exponent, std::move(c));
  return p;
}

LaurentPoly LaurentPoly::q(int exponent) { return monomial(1, exponent); }

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
}

int LaurentPoly::min_exponent() const {
  if (terms_.empty()) throw std::domain_error("min_exponent of zero polynomial");
  return terms_.begin()->first;
}

int LaurentPoly::max_exponent() const {
  if (terms_.empty()) throw std::domain_error("max_exponent of zero polynomial");
  return terms_.rbegin()->first;
}

Rational LaurentPoly::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::add_term(int exponent, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& other) {
  *this = *this * other;
  return *this;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (b.terms_.size() == 1) {
    const auto& [eb, cb] = *b.terms_.begin();
    LaurentPoly p;
    for (const auto& [ea, ca] : a.terms_) p.terms_.emplace_hint(p.terms_.end(), ea + eb, ca * cb);
    return p;
  }
  if (a.terms_.size() == 1) return b * a;
  // Dense accumulation over the exponent window.
  const int lo = a.min_exponent() + b.min_exponent();
  const int hi = a.max_exponent() + b.max_exponent();
  std::vector<Rational> acc(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) acc[static_cast<std::size_t>(ea + eb - lo)] += ca * cb;
  LaurentPoly p;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] != 0) p.terms_.emplace_hint(p.terms_.end(), lo + static_cast<int>(i), acc[i]);
  return p;
}

LaurentPoly LaurentPoly::shifted(int shift) const {
  LaurentPoly p;
  for (const auto& [e, c] : terms_) p.terms_.emplace_hint(p.terms_.end(), e + shift, c);
  return p;
}

LaurentPoly LaurentPoly::inverted() const {
  LaurentPoly p;
  for (const auto& [e, c] : terms_) p.terms_.emplace(-e, c);
  return p;
}

LaurentPoly LaurentPoly::divide_exact(const LaurentPoly& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (is_zero()) return {};
  LaurentPoly remainder = *this;
  LaurentPoly quotient;
  const int dhi = divisor.max_exponent();
  const int dspan = dhi - divisor.min_exponent();
  const Rational& dlead = divisor.terms_.rbegin()->second;
  while (!remainder.is_zero() && remainder.max_exponent() - remainder.min_exponent() >= dspan) {
    const int e = remainder.max_exponent() - dhi;
    const Rational c = remainder.terms_.rbegin()->second / dlead;
    quotient.add_term(e, c);
    remainder -= divisor * monomial(c, e);
  }
  if (!remainder.is_zero())
    throw std::domain_error("inexact division: remainder " + remainder.to_string());
  return quotient;
}

Rational LaurentPoly::eval(const Rational& q0) const {
  if (q0 == 0) throw std::domain_error("evaluation at q = 0");
  Rational total = 0;
  for (const auto& [e, c] : terms_) {
    Rational power = 1;
    const Rational base = e >= 0 ? q0 : Rational(1 / q0);
    mpz_pow_ui(power.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(std::abs(e)));
    mpz_pow_ui(power.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(std::abs(e)));
    power.canonicalize();
    total += c * power;
  }
  return total;
}

double LaurentPoly::eval(double q0) const {
  if (q0 == 0.0) throw std::domain_error("evaluation at q = 0");
  double total = 0.0;
  for (const auto& [e, c] : terms_) total += c.get_d() * std::pow(q0, e);
  return total;
}

namespace {

std::string format_term(int e, const Rational& magnitude) {
  std::string mono;
  if (e == 1) {
    mono = "q";
  } else if (e != 0) {
    mono = "q^" + std::to_string(e);
  }
  if (mono.empty()) return magnitude.get_str();
  if (magnitude == 1) return mono;
  return magnitude.get_str() + " " + mono;
}

}  // namespace

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const bool negative = it->second < 0;
    const Rational magnitude = abs(it->second);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += format_term(it->first, magnitude);
    first = false;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

namespace {

class PolyScanner {
 public:
  explicit PolyScanner(std::string_view text) : text_(text) {}

  LaurentPoly parse() {
    skip();
    if (done()) fail("empty polynomial");
    LaurentPoly result;
    bool first = true;
    while (!done()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      result += parse_term() * LaurentPoly(sign);
      first = false;
      skip();
    }
    return result;
  }

 private:
  LaurentPoly parse_term() {
    Rational coefficient = 1;
    bool has_number = false;
    if (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      coefficient = parse_number();
      has_number = true;
      skip();
    }
    int exponent = 0;
    if (!done() && peek() == 'q') {
      ++pos_;
      exponent = 1;
      skip();
      if (!done() && peek() == '^') {
        ++pos_;
        skip();
        exponent = parse_int();
      }
    } else if (!has_number) {
      fail("expected a coefficient or q");
    }
    return LaurentPoly::monomial(coefficient, exponent);
  }

  Rational parse_number() {
    const std::size_t start = pos_;
    while (!done() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos_;
    return parse_rational(text_.substr(start, pos_ - start));
  }

  int parse_int() {
    const std::size_t start = pos_;
    if (!done() && (peek() == '-' || peek() == '+')) ++pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string digits(text_.substr(start, pos_ - start));
    if (digits.empty() || digits == "-" || digits == "+") fail("expected an integer exponent");
    return std::stoi(digits);
  }

  void skip() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("LaurentPoly::parse: " + what + " at offset " +
                                std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly LaurentPoly::parse(std::string_view text) { return PolyScanner(text).parse(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto strip = [](std::string& v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(v.begin());
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
  };
  strip(s);
  if (s.empty()) throw std::invalid_argument("empty rational");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw std::invalid_argument("not a rational: '" + s + "'");
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

LaurentPoly qint(int n) {
  if (n < 0) throw std::invalid_argument("qint: negative argument");
  const LaurentPoly numerator = LaurentPoly::q(n) - LaurentPoly::q(-n);
  return numerator.divide_exact(LaurentPoly::q(1) - LaurentPoly::q(-1));
}

LaurentPoly qfact(int n) {
  if (n < 0) throw std::invalid_argument("qfact: negative argument");
  static std::mutex mu;
  static std::vector<LaurentPoly> table{LaurentPoly(1)};
  std::lock_guard lock(mu);
  while (static_cast<int>(table.size()) <= n) {
    const int next = static_cast<int>(table.size());
    table.push_back(table.back() * qint(next));
  }
  return table[static_cast<std::size_t>(n)];
}

LaurentPoly qmultinomial(std::span<const int> parts) {
  int total = 0;
  for (int j : parts) {
    if (j < 0) throw std::invalid_argument("qmultinomial: negative part");
    total += j;
  }
  LaurentPoly result = qfact(total);
  for (int j : parts)
    if (j > 1) result = result.divide_exact(qfact(j));
  return result;
}

}  // namespace qcpn

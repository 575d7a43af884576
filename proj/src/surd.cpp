#include "qcpn/surd.hpp"

#include <cmath>
#include <stdexcept>

namespace qcpn {

namespace {

constexpr unsigned long kTrialBound = 1ul << 20;

}  // namespace

std::pair<Integer, Integer> squarefree_split(const Integer& value) {
  if (value <= 0) throw std::domain_error("squarefree_split needs a positive integer");
  Integer rest = value;
  Integer root = 1;
  Integer free = 1;
  for (unsigned long p = 2; p <= kTrialBound; p += (p == 2 ? 1 : 2)) {
    const Integer pp = Integer(p) * p;
    if (pp > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    int power = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      rest /= p;
      ++power;
    }
    for (int e = 0; e < power / 2; ++e) root *= p;
    if (power % 2 != 0) free *= p;
  }
  if (rest > 1) {
    // Every prime factor of rest exceeds the trial bound B, unless rest is a
    // prime itself. Below B^3 it is then p, p*q or p^2.
    const Integer bound = Integer(kTrialBound);
    if (rest >= bound * bound * bound)
      throw std::domain_error("cannot split " + value.get_str() + " into square and squarefree parts");
    if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
      Integer s;
      mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
      root *= s;
    } else {
      free *= rest;
    }
  }
  return {root, free};
}

SurdNumber::SurdNumber(long value) {
  if (value != 0) terms_.emplace(Integer(1), Rational(value));
}

SurdNumber::SurdNumber(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v != 0) terms_.emplace(Integer(1), v);
}

SurdNumber SurdNumber::sqrt(const Rational& r) {
  Rational v = r;
  v.canonicalize();
  if (v < 0) throw std::domain_error("square root of a negative number");
  SurdNumber out;
  if (v == 0) return out;
  // sqrt(a/b) = sqrt(a b) / b
  const Integer product = v.get_num() * v.get_den();
  auto [root, free] = squarefree_split(product);
  out.terms_.emplace(free, Rational(root, v.get_den()));
  out.terms_.begin()->second.canonicalize();
  return out;
}

bool SurdNumber::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

double SurdNumber::to_double() const {
  double total = 0;
  for (const auto& [s, c] : terms_) total += c.get_d() * std::sqrt(s.get_d());
  return total;
}

std::string SurdNumber::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    if (!first) out += c < 0 ? " - " : " + ";
    const Rational magnitude = first ? c : abs(c);
    first = false;
    if (s == 1) {
      out += magnitude.get_str();
    } else if (magnitude == 1) {
      out += "sqrt(" + s.get_str() + ")";
    } else if (magnitude == -1) {
      out += "-sqrt(" + s.get_str() + ")";
    } else {
      out += magnitude.get_str() + " sqrt(" + s.get_str() + ")";
    }
  }
  return out;
}

void SurdNumber::add(const Integer& radicand, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(radicand, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SurdNumber& SurdNumber::operator+=(const SurdNumber& other) {
  for (const auto& [s, c] : other.terms_) add(s, c);
  return *this;
}

SurdNumber& SurdNumber::operator-=(const SurdNumber& other) {
  for (const auto& [s, c] : other.terms_) add(s, -c);
  return *this;
}

SurdNumber SurdNumber::operator-() const {
  SurdNumber out = *this;
  for (auto& [s, c] : out.terms_) c = -c;
  return out;
}

SurdNumber operator*(const SurdNumber& a, const SurdNumber& b) {
  SurdNumber out;
  for (const auto& [sa, ca] : a.terms_) {
    for (const auto& [sb, cb] : b.terms_) {
      // sqrt(sa) sqrt(sb) = g sqrt((sa/g)(sb/g)) with g = gcd, both squarefree
      Integer g;
      mpz_gcd(g.get_mpz_t(), sa.get_mpz_t(), sb.get_mpz_t());
      const Integer free = (sa / g) * (sb / g);
      out.add(free, ca * cb * Rational(g));
    }
  }
  return out;
}

}  // namespace qcpn

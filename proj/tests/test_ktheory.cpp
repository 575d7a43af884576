#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcpn/ktheory.hpp"
#include "qcpn/repspace.hpp"

using qcpn::LaurentPoly;
using qcpn::NCElement;
using qcpn::RootedElement;
using qcpn::z;
using qcpn::zstar;

namespace {

// Symmetric q-integer and multinomial, evaluated numerically.
double qnum(int k, double q) { return (std::pow(q, k) - std::pow(q, -k)) / (q - 1 / q); }

double qmultinomial_value(const std::vector<int>& j, double q) {
  double value = 1;
  int total = 0;
  for (int part : j)
    for (int t = 1; t <= part; ++t) value *= qnum(++total, q) / qnum(t, q);
  return value;
}

double radicand_value(const qcpn::Radicand& r, double q) {
  double value = 1;
  for (const auto& f : r) value *= f.eval(q);
  return std::sqrt(value);
}

std::size_t binomial(int a, int b) {
  std::size_t out = 1;
  for (int t = 1; t <= b; ++t) out = out * static_cast<std::size_t>(a - b + t) / static_cast<std::size_t>(t);
  return out;
}

qcpn::SparseOperator<double> represent_rooted(const qcpn::FloatField& field, int k, const RootedElement& x,
                                              std::shared_ptr<const qcpn::TruncatedSpace> space) {
  qcpn::SparseOperator<double> out(space);
  for (const auto& [r, body] : x.parts())
    out += radicand_value(r, field.q()) * qcpn::represent(field, k, body, space);
  return out;
}

}  // namespace

TEST_CASE("compositions") {
  const auto c = qcpn::compositions(2, 1);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::vector<int>{0, 2});
  CHECK(c[2] == std::vector<int>{2, 0});
  for (int N = 0; N <= 5; ++N)
    for (int n = 0; n <= 3; ++n) CHECK(qcpn::compositions(N, n).size() == binomial(N + n, n));
}

TEST_CASE("rooted elements") {
  const int n = 1;
  const LaurentPoly two_plus_q = LaurentPoly(2) + LaurentPoly::q(1);
  const RootedElement a = RootedElement::rooted({two_plus_q}, NCElement::generator(n, z(0)));
  const RootedElement b = RootedElement::rooted({two_plus_q}, NCElement::generator(n, zstar(0)));
  const RootedElement ab = a * b;
  CHECK(ab.is_rational());
  CHECK(ab.rational() == two_plus_q * NCElement::word(n, {z(0), zstar(0)}));
  CHECK(star(a) == b);
  CHECK((a - a).is_zero());
  CHECK_THROWS_AS(a.rational(), std::domain_error);
  const auto [rest, pulled] = qcpn::combine_radicands({LaurentPoly::q(1), two_plus_q}, {two_plus_q});
  CHECK(rest == qcpn::Radicand{LaurentPoly::q(1)});
  CHECK(pulled == two_plus_q);
  // Unit radicand factors vanish.
  CHECK(RootedElement::rooted({LaurentPoly(1)}, NCElement::one(n)) == RootedElement(NCElement::one(n)));
}

TEST_CASE("degree one isometry") {
  for (int n = 1; n <= 3; ++n) {
    const auto v = qcpn::psi(1, n);
    REQUIRE(v.size() == static_cast<std::size_t>(n + 1));
    // Components ordered lexicographically: (0,...,0,1) first, i.e. z_n^*.
    for (int i = 0; i <= n; ++i) {
      const auto& c = v.components[static_cast<std::size_t>(n - i)];
      CHECK(c.value == RootedElement(NCElement::generator(n, zstar(i))));
    }
    const auto P = qcpn::projection(1, n);
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        // Entry (a,b) is psi_a psi_b^* = z_i^* z_j with i = n - a, j = n - b.
        CHECK(P.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)).rational() == qcpn::p(n, n - a, n - b));
      }
    CHECK(qcpn::qtrace(P) == NCElement::one(n));
  }
}

TEST_CASE("negative degree one isometry") {
  for (int n = 1; n <= 3; ++n) {
    const auto v = qcpn::psi_neg(1, n);
    for (int i = 0; i <= n; ++i) {
      const auto& c = v.components[static_cast<std::size_t>(n - i)];
      CHECK(c.value == RootedElement(NCElement::word(n, {z(i)}, LaurentPoly::q(i))));
    }
    const auto P = qcpn::projection(-1, n);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const NCElement expected = NCElement::word(n, {z(i), zstar(j)}, LaurentPoly::q(i + j));
        CHECK(P.at(static_cast<std::size_t>(n - i), static_cast<std::size_t>(n - j)).rational() == expected);
      }
  }
  // Recorded, not asserted against a closed form: the q-trace of P_{-1} for n = 1,
  // which follows from the entries q^{i+j} z_i z_j^* above.
  const NCElement t = qcpn::qtrace(qcpn::projection(-1, 1));
  CHECK(t == NCElement::parse(1, "z0 z0* + (q^4) z1 z1*"));
  MESSAGE("qtrace(P_-1), n = 1: " << t.to_string());
}

TEST_CASE("zero degree") {
  for (int n = 0; n <= 2; ++n) {
    const auto P = qcpn::projection(0, n);
    REQUIRE(P.size() == 1);
    CHECK(P.at(0, 0) == RootedElement(NCElement::one(n)));
    CHECK(qcpn::qtrace(P) == NCElement::one(n));
    CHECK(qcpn::verify_projection(P).ok());
  }
}

TEST_CASE("component coefficients match the q-multinomial") {
  const double q0 = 0.37;
  for (int n = 1; n <= 3; ++n)
    for (int N : {2, 3}) {
      for (const int sign : {1, -1}) {
        const auto v = qcpn::isometry(sign * N, n);
        REQUIRE(v.size() == binomial(N + n, n));
        for (const auto& c : v.components) {
          double sigma = 0, weighted = 0;
          for (std::size_t r = 0; r < c.degrees.size(); ++r) {
            weighted += static_cast<double>(r) * c.degrees[r];
            for (std::size_t s = r + 1; s < c.degrees.size(); ++s) sigma += c.degrees[r] * c.degrees[s];
          }
          const double power = sign > 0 ? -sigma / 2 : sigma / 2 + weighted;
          // The displayed word, which the normal form may reorder.
          qcpn::Word w;
          for (std::size_t r = 0; r < c.degrees.size(); ++r)
            w.insert(w.end(), static_cast<std::size_t>(c.degrees[r]),
                     qcpn::Generator{static_cast<int>(r), sign > 0});
          const NCElement normal = NCElement::word(n, w);
          REQUIRE(normal.size() == 1);
          const double expected = std::sqrt(qmultinomial_value(c.degrees, q0)) * std::pow(q0, power) *
                                  normal.terms().begin()->second.eval(q0);
          // Exactly one part: the coefficient times a single normal word.
          REQUIRE(c.value.parts().size() == 1);
          const auto& [r, body] = *c.value.parts().begin();
          REQUIRE(body.size() == 1);
          const double got = radicand_value(r, q0) * body.terms().begin()->second.eval(q0);
          CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
}

TEST_CASE("isometry and projection identities") {
  for (auto [N, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {-1, 1}, {-1, 2}, {-2, 2}, {3, 1}, {-3, 1}}) {
    INFO("N=" << N << " n=" << n);
    CHECK(qcpn::isometry_defect(qcpn::isometry(N, n)).is_zero());
    const auto direct = qcpn::verify_projection(N, n, qcpn::SquareMethod::kDirect);
    const auto factored = qcpn::verify_projection(N, n, qcpn::SquareMethod::kFactored);
    CHECK(direct.ok());
    CHECK(factored.ok());
    CHECK(direct.method == qcpn::SquareMethod::kDirect);
    CHECK(factored.method == qcpn::SquareMethod::kFactored);
    CHECK(direct.size == binomial(std::abs(N) + n, n));
  }
}

TEST_CASE("a broken projection is detected") {
  auto P = qcpn::projection(1, 1);
  P.at(0, 1) = P.at(0, 1) + RootedElement(NCElement::generator(1, z(0)));
  const auto report = qcpn::verify_projection(P);
  CHECK_FALSE(report.ok());
  CHECK(report.selfadjoint_residual_words > 0);
}

TEST_CASE("trace words agree with the matrix trace") {
  for (int n = 1; n <= 2; ++n)
    for (int N : {-3, -2, -1, 1, 2, 3}) {
      const auto P = qcpn::projection(N, n);
      CHECK(qcpn::normalize(n, qcpn::trace_words(N, n)) == qcpn::matrix_trace(P));
    }
}

TEST_CASE("represented projections are idempotent on interior vectors") {
  const qcpn::FloatField field(0.45);
  for (auto [N, n] : std::vector<std::pair<int, int>>{{-1, 1}, {-2, 1}, {2, 1}, {-1, 2}, {-2, 2}}) {
    const auto P = qcpn::projection(N, n);
    const auto space = std::make_shared<const qcpn::TruncatedSpace>(n, n == 1 ? 14 : 8);
    const std::size_t s = P.size();
    for (int k = 0; k <= n; ++k) {
      std::vector<qcpn::SparseOperator<double>> Q;
      for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < s; ++b) Q.push_back(represent_rooted(field, k, P.at(a, b), space));
      double worst = 0;
      for (std::size_t a = 0; a < s; ++a)
        for (std::size_t c = 0; c < s; ++c) {
          qcpn::SparseOperator<double> sq(space);
          for (std::size_t b = 0; b < s; ++b) sq += Q[a * s + b] * Q[b * s + c];
          worst = std::max(worst, qcpn::max_abs_on_interior(sq - Q[a * s + c], 2 * std::abs(N) + 1));
          worst = std::max(worst, qcpn::max_abs_on_interior(Q[a * s + c] - Q[c * s + a].adjoint(), 0));
        }
      INFO("N=" << N << " n=" << n << " k=" << k);
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("projection export") {
  const auto P = qcpn::projection(-1, 1);
  const auto json = qcpn::to_json(P);
  CHECK(json["schema"] == "qcpn.projection/1");
  CHECK(json["size"] == 2);
  const auto report = qcpn::to_json(qcpn::verify_projection(1, 1));
  CHECK(report["schema"] == "qcpn.projection-report/1");
  CHECK(report["ok"] == true);
}

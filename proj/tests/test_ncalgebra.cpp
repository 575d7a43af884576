#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcpn/ncalgebra.hpp"
#include "rewrite_oracle.hpp"

using qcpn::LaurentPoly;
using qcpn::NCElement;
using qcpn::z;
using qcpn::zstar;

namespace {

NCElement gen(int n, qcpn::Generator g) { return NCElement::generator(n, g); }

}  // namespace

TEST_CASE("unit law and q-commutation of unstarred generators") {
  const int n = 2;
  const NCElement x = NCElement::parse(n, "z0 z2* + (q - 1) z1");
  CHECK(NCElement::one(n) * x == x);
  CHECK(x * NCElement::one(n) == x);
  CHECK(gen(n, z(0)) * gen(n, z(1)) == LaurentPoly::q(-1) * (gen(n, z(1)) * gen(n, z(0))));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j)
        CHECK((gen(n, zstar(i)) * gen(n, z(j)) - LaurentPoly::q(1) * (gen(n, z(j)) * gen(n, zstar(i))))
                  .is_zero());
}

TEST_CASE("defining relations normalize to zero") {
  for (int n = 0; n <= 3; ++n) {
    for (const auto& check : qcpn::sphere_relation_residuals(n)) {
      INFO("n=" << n << " relation " << check.family);
      CHECK(check.residual.is_zero());
    }
  }
  CHECK(NCElement::parse(3, "z0 z0* + z1 z1* + z2 z2* + z3 z3*") == NCElement::one(3));
  CHECK(NCElement::parse(2, "z2* z2 - z2 z2*").is_zero());
  CHECK(NCElement::parse(2, "z0* z0 - z0 z0* + (q^2 - 1) z1 z1* + (q^2 - 1) z2 z2*").is_zero());
}

TEST_CASE("involution") {
  const int n = 2;
  CHECK(star(NCElement::one(n)) == NCElement::one(n));
  CHECK(star(gen(n, z(0))) == gen(n, zstar(0)));
  CHECK(star(qcpn::p(n, 0, 1)) == qcpn::p(n, 1, 0));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const NCElement a = NCElement::word(n, oracle::random_word(n, 3, rng), LaurentPoly::parse("q - 2"));
    const NCElement b = NCElement::word(n, oracle::random_word(n, 3, rng));
    CHECK(star(star(a)) == a);
    CHECK(star(a * b) == star(b) * star(a));
  }
}

TEST_CASE("projection generators") {
  CHECK(qcpn::p(0, 0, 0) == NCElement::one(0));
  CHECK_THROWS_AS(qcpn::p(2, 0, 3), std::out_of_range);
  for (int n = 1; n <= 3; ++n) {
    NCElement qtrace(n);
    for (int i = 0; i <= n; ++i) qtrace += LaurentPoly::q(2 * i) * qcpn::p(n, i, i);
    CHECK(qtrace == NCElement::one(n));
    for (int i = 0; i <= n; ++i)
      for (int k = 0; k <= n; ++k) {
        NCElement square(n);
        for (int j = 0; j <= n; ++j) square += qcpn::p(n, i, j) * qcpn::p(n, j, k);
        CHECK(square == qcpn::p(n, i, k));
      }
  }
}

TEST_CASE("projective space relation families") {
  for (int n = 1; n <= 3; ++n) {
    const auto report = qcpn::verify_cp_relations(n);
    INFO("n=" << n);
    for (const auto& v : report.violations) INFO(v.family << " residual " << v.residual.to_string());
    CHECK(report.ok());
    CHECK(report.checked_per_family[0] > 0);
  }
  CHECK(qcpn::cp_relation_residual(1, qcpn::CpFamily::kInverse, {0, 1}).is_zero());
  CHECK(qcpn::cp_relation_residual(2, qcpn::CpFamily::kCommuting, {0, 1, 2, 1}).is_zero());
  CHECK_THROWS_AS(qcpn::cp_relation_residual(2, qcpn::CpFamily::kChained, {1, 0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(qcpn::verify_cp_relations(0), std::invalid_argument);
  const auto sampled = qcpn::verify_cp_relations(3, 10, 99);
  CHECK(sampled.checked == 30);
  CHECK(sampled.ok());
}

TEST_CASE("dropping the top generator") {
  const int n = 2;
  CHECK(qcpn::drop_top_generator(gen(n, z(n))).is_zero());
  CHECK(qcpn::drop_top_generator(NCElement::one(n)) == NCElement::one(n - 1));
  // The sphere relation for n maps onto the sphere relation for n - 1.
  const NCElement lhs = NCElement::parse(n, "z0 z0* + z1 z1*");
  CHECK(qcpn::drop_top_generator(lhs) == NCElement::one(n - 1));
  CHECK_THROWS_AS(qcpn::drop_top_generator(NCElement::one(0)), std::invalid_argument);
  // Morphism property on random products.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const NCElement a = NCElement::word(n, oracle::random_word(n, 3, rng));
    const NCElement b = NCElement::word(n, oracle::random_word(n, 3, rng));
    CHECK(qcpn::drop_top_generator(a * b) ==
          qcpn::drop_top_generator(a) * qcpn::drop_top_generator(b));
  }
  // p_ij land in the lower projective algebra.
  CHECK(qcpn::drop_top_generator(qcpn::p(n, 0, 1)) == qcpn::p(n - 1, 0, 1));
  CHECK(qcpn::drop_top_generator(qcpn::p(n, 0, 2)).is_zero());
}

TEST_CASE("substituted generators satisfy the relations at 1/q") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<NCElement> zp;
    for (int i = 0; i <= n; ++i) zp.push_back(LaurentPoly::q(i) * gen(n, zstar(i)));
    const LaurentPoly gap = LaurentPoly(1) - LaurentPoly::q(-2);
    for (int i = 0; i < n; ++i) {
      NCElement residual = star(zp[i]) * zp[i] - zp[i] * star(zp[i]);
      for (int j = i + 1; j <= n; ++j) residual -= gap * (zp[j] * star(zp[j]));
      CHECK(residual.is_zero());
    }
  }
}

TEST_CASE("random-strategy rewriting agrees with the normalizer") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    const int n = static_cast<int>(rng() % 4);
    const std::size_t length = rng() % 9;
    const qcpn::Word w = oracle::random_word(n, length, rng);
    const NCElement reference = NCElement::word(n, w);
    oracle::WordSum input{{w, LaurentPoly(1)}};
    const qcpn::Terms first = oracle::normalize_random(n, input, rng);
    const qcpn::Terms second = oracle::normalize_random(n, input, rng);
    INFO("word " << qcpn::to_string(w) << " n=" << n);
    CHECK(first == reference.terms());
    CHECK(second == reference.terms());
    ++checked;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("all critical pairs are joinable") {
  // Every rule has a left side of length two, so overlaps live in words of
  // length three. Rewriting any redex first must give the same normal form.
  for (int n = 0; n <= 3; ++n) {
    std::vector<qcpn::Generator> letters;
    for (int i = 0; i <= n; ++i) {
      letters.push_back(z(i));
      letters.push_back(zstar(i));
    }
    for (const auto& a : letters)
      for (const auto& b : letters)
        for (const auto& c : letters) {
          const qcpn::Word w{a, b, c};
          const NCElement reference = NCElement::word(n, w);
          for (std::size_t pos : oracle::redexes(n, w)) {
            NCElement reduct(n);
            for (const auto& [next, coeff] : oracle::rewrite_at(n, w, pos))
              reduct += NCElement::word(n, next, coeff);
            INFO("overlap " << qcpn::to_string(w) << " at " << pos);
            CHECK(reduct == reference);
          }
        }
  }
}

TEST_CASE("multiplication respects parenthesization") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const qcpn::Word u = oracle::random_word(n, rng() % 5, rng);
    const qcpn::Word v = oracle::random_word(n, rng() % 5, rng);
    const qcpn::Word t = oracle::random_word(n, rng() % 3, rng);
    qcpn::Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const NCElement a = NCElement::word(n, u), b = NCElement::word(n, v), c = NCElement::word(n, t);
    CHECK(a * b == NCElement::word(n, uv));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("text grammar") {
  const int n = 2;
  const NCElement x = NCElement::parse(n, "z0 z1* + (q^2 - 1) z2 z2*");
  CHECK(NCElement::parse(n, x.to_string()) == x);
  CHECK(NCElement::parse(n, "1") == NCElement::one(n));
  CHECK(NCElement::parse(n, "-z0 + 2 q^-1 z1*").to_string() == "-z0 + (2 q^-1) z1*");
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const NCElement y = NCElement::word(n, oracle::random_word(n, 4, rng), LaurentPoly::parse("q^3 - 1/2"));
    CHECK(NCElement::parse(n, y.to_string()) == y);
  }
  CHECK(NCElement(n).to_string() == "0");
  CHECK_THROWS_AS(NCElement::parse(n, "z3"), std::invalid_argument);
  CHECK_THROWS_AS(NCElement::parse(n, "z0 + + z1"), std::invalid_argument);
  CHECK_THROWS_AS(NCElement::parse(n, "(q z0"), std::invalid_argument);
}

TEST_CASE("mismatched algebras are rejected") {
  CHECK_THROWS_AS(NCElement::one(1) + NCElement::one(2), std::invalid_argument);
  CHECK_THROWS_AS(NCElement::one(1) * NCElement::one(2), std::invalid_argument);
}

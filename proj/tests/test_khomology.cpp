#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "qcpn/khomology.hpp"
#include "qcpn/ktheory.hpp"

using qcpn::NCElement;

namespace {

// Tr (pi_+ - pi_-)(a) on the box, computed from full operator matrices.
double matrix_trace_difference(const NCElement& a, int k, double q0, int cutoff) {
  const qcpn::FredholmModule mu(a.n(), k, cutoff);
  const auto diff = mu.pi_plus(a, q0) - mu.pi_minus(a, q0);
  double total = 0;
  for (std::size_t i = 0; i < diff.dimension(); ++i) total += diff.entry(i, i);
  return total;
}

}  // namespace

TEST_CASE("module axioms") {
  for (int k = 0; k <= 2; ++k) {
    const auto mu = qcpn::pullback_module(k, 2, 4);
    const auto F = mu.F();
    const auto g = mu.grading();
    const auto one = qcpn::BlockOperator::identity(mu.space());
    CHECK(F * F == one);
    CHECK(F.adjoint() == F);
    CHECK((F * g + g * F).max_abs() == 0.0);
    CHECK(g * g == one);
  }
}

TEST_CASE("pullback kills the higher generators") {
  const int n = 3;
  for (int k = 0; k <= n; ++k) {
    const qcpn::FredholmModule mu(n, k, 3);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const NCElement image = mu.pullback(qcpn::p(n, i, j));
        if (std::max(i, j) > k) {
          CHECK(image.is_zero());
        } else {
          CHECK(image == qcpn::p(k, i, j));
        }
      }
  }
  // k = n applies no pullback.
  const qcpn::FredholmModule top(2, 2, 3);
  const NCElement x = qcpn::p(2, 0, 2) * qcpn::p(2, 1, 1);
  CHECK(top.pullback(x) == x);
}

TEST_CASE("classical point") {
  // H_0 is one dimensional; pi_+ evaluates at the classical point, pi_- is zero.
  const qcpn::FredholmModule mu(2, 0, 5);
  CHECK(mu.space()->size() == 1);
  CHECK(mu.pi_plus(qcpn::p(2, 0, 0), 0.5).entry(0, 0) == 1.0);
  CHECK(mu.pi_plus(qcpn::p(2, 1, 1), 0.5).nonzeros() == 0);
  CHECK(mu.pi_minus(NCElement::one(2), 0.5).nonzeros() == 0);
}

TEST_CASE("trace differences") {
  const double q0 = 0.5;
  // p_ij with j > k vanishes in both representations.
  CHECK(qcpn::trace_difference(qcpn::p(3, 0, 3), 2, q0, 10).value == 0.0);
  CHECK(qcpn::trace_difference(qcpn::p(2, 1, 2), 1, q0, 10).value == 0.0);
  // The unit: every supported vector lies in exactly two consecutive supports.
  CHECK(qcpn::trace_difference(NCElement::one(2), 0, q0, 6).value == 1.0);
  for (int k = 1; k <= 3; ++k) CHECK(qcpn::trace_difference(NCElement::one(3), k, q0, 6).value == 0.0);
  // The layered path trace agrees with the trace of the operator matrices.
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
          const NCElement a = qcpn::p(n, i, j) + qcpn::p(n, i, j) * qcpn::p(n, j, i);
          const double fast = qcpn::trace_difference(a, k, q0, 9).value;
          CHECK(fast == doctest::Approx(matrix_trace_difference(a, k, q0, 9)).epsilon(1e-13));
        }
}

TEST_CASE("diagonal decay of p_kk") {
  const double q0 = 0.6;
  for (int k = 1; k <= 2; ++k) {
    const auto profile = qcpn::decay_profile(qcpn::p(k, k, k), k, q0, 30);
    // Every layer-t column sums entries bounded by q^{2t} times the number of vectors.
    for (int t = 0; t <= 30; ++t) {
      const double vectors = k == 1 ? 1.0 : 2.0 * t + 1.0;
      CHECK(std::fabs(profile.trace[static_cast<std::size_t>(t)]) <= vectors * std::pow(q0, 2 * t) + 1e-15);
    }
  }
}

TEST_CASE("tail bound covers the remainder") {
  for (double q0 : {0.3, 0.5, 0.8})
    for (int k = 1; k <= 2; ++k)
      for (int N = 1; N <= 3; ++N) {
        const auto words = qcpn::restrict_to_level(qcpn::trace_words(-N, k), k);
        const int c = 6;
        const int far = q0 < 0.7 ? 60 : 160;
        const auto layers = qcpn::trace_layers(words, k, q0, far);
        double rest = 0;
        for (int t = c + 1; t <= far; ++t) rest += layers.trace[static_cast<std::size_t>(t)];
        INFO("q=" << q0 << " k=" << k << " N=" << N);
        CHECK(std::fabs(rest) <= qcpn::tail_bound(words, k, q0, c));
      }
}

TEST_CASE("certified cutoff is minimal") {
  const auto words = qcpn::restrict_to_level(qcpn::trace_words(-2, 2), 2);
  const int c = qcpn::certified_cutoff(words, 2, 0.5);
  CHECK(qcpn::tail_bound(words, 2, 0.5, c) < 1e-6);
  CHECK(qcpn::tail_bound(words, 2, 0.5, c - 1) >= 1e-6);
}

TEST_CASE("index pairings") {
  CHECK(qcpn::pairing(2, 0, 3, 0.5).rounded == 1);
  CHECK(qcpn::pairing(2, 2, 1, 0.5).rounded == 0);
  const auto r = qcpn::pairing(1, 1, 2, 0.5, 60);
  CHECK(r.certified);
  CHECK(std::fabs(r.value - 2.0) <= 1e-6);
  for (double q0 : {0.3, 0.5})
    for (int n = 1; n <= 2; ++n)
      for (int k = 0; k <= n; ++k)
        for (int N = 0; N <= 3; ++N) {
          const auto p = qcpn::pairing(n, k, N, q0);
          INFO("q=" << q0 << " n=" << n << " k=" << k << " N=" << N);
          CHECK(p.certified);
          CHECK(p.rounded == qcpn::binomial(N, k));
        }
  // A cutoff too small to certify is reported as such.
  const auto coarse = qcpn::pairing(2, 2, 3, 0.8, 2);
  CHECK_FALSE(coarse.certified);
  CHECK_THROWS_AS(qcpn::pairing(1, 2, 1, 0.5), std::out_of_range);
  CHECK_THROWS_AS(qcpn::pairing(1, 1, 1, 1.5), std::domain_error);
}

TEST_CASE("thread count does not change the result") {
  const auto words = qcpn::restrict_to_level(qcpn::trace_words(-3, 3), 3);
  setenv("QCPN_THREADS", "1", 1);
  const auto one = qcpn::trace_layers(words, 3, 0.5, 12);
  setenv("QCPN_THREADS", "3", 1);
  const auto three = qcpn::trace_layers(words, 3, 0.5, 12);
  unsetenv("QCPN_THREADS");
  CHECK(one.trace == three.trace);
}

TEST_CASE("pairing matrix") {
  const auto m1 = qcpn::pairing_matrix(1, 0.5);
  CHECK(m1.M == qcpn::IntMatrix{{1, 1}, {0, 1}});
  CHECK(m1.inverse == qcpn::IntMatrix{{1, -1}, {0, 1}});
  CHECK(m1.unimodular);
  const auto m2 = qcpn::pairing_matrix(2, 0.3);
  CHECK(m2.M == qcpn::IntMatrix{{1, 1, 1}, {0, 1, 2}, {0, 0, 1}});
  CHECK(m2.unimodular);
  CHECK_THROWS_AS(qcpn::pairing_matrix(2, 0.8, 1), qcpn::UncertifiedPairing);
  const auto json = qcpn::to_json(m1);
  CHECK(json["schema"] == "qcpn.pairing-matrix/1");
  CHECK(json["entries"].size() == 4);
}

TEST_CASE("alternating binomial sums") {
  CHECK(qcpn::alternating_sum_identity(3, 3) == 1);
  CHECK(qcpn::alternating_sum_identity(4, 1) == 0);
  CHECK(qcpn::alternating_sum_identity(2, 0) == 0);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= i; ++j) CHECK(qcpn::alternating_sum_identity(i, j) == (i == j ? 1 : 0));
  CHECK_THROWS_AS(qcpn::alternating_sum_identity(1, 2), std::invalid_argument);
}

TEST_CASE("capconstr counts") {
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= n; ++k)
      for (int t = 0; t <= 8; ++t) CHECK(qcpn::capconstr_count(n, k, t) == qcpn::capconstr_count_formula(n, k, t));
  CHECK(qcpn::capconstr_count_formula(3, 1, 0) == 0);
  CHECK(qcpn::capconstr_count_formula(2, 2, 3) == 4);
}

TEST_CASE("q to zero limit") {
  for (int N = 0; N <= 6; ++N)
    for (int k = 0; k <= 4; ++k) CHECK(qcpn::q_limit_pairing(N, k) == qcpn::binomial(N, k));
}

TEST_CASE("doubling ratio of a geometric sequence") {
  std::vector<double> layers;
  for (int t = 0; t <= 40; ++t) layers.push_back(std::pow(0.7, t));
  CHECK(qcpn::doubling_ratio(layers, 10) == doctest::Approx(0.7));
  CHECK_THROWS_AS(qcpn::doubling_ratio(layers, 11), std::invalid_argument);
}

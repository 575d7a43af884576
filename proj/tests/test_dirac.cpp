#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcpn/dirac.hpp"
#include "qcpn/khomology.hpp"

namespace {

std::shared_ptr<const qcpn::TruncatedSpace> box(int n, int cutoff) {
  return std::make_shared<const qcpn::TruncatedSpace>(n, cutoff);
}

}  // namespace

TEST_CASE("eigenvalues of |D|") {
  {
    const qcpn::DiracOperator D(1, 1.0, box(1, 6));
    for (int m = 0; m <= 6; ++m) CHECK(D.abs_values()[static_cast<std::size_t>(m)] == m);
  }
  {
    const auto space = box(2, 4);
    const qcpn::DiracOperator D(2, 2.0, space);
    CHECK(D.abs_values()[*space->index({1, 2})] == 3.0);
    CHECK(D.abs_values()[*space->index({0, 0})] == 0.0);
    const qcpn::DiracOperator half(2, 1.0, space);
    CHECK(half.abs_values()[*space->index({1, 2})] == doctest::Approx(9.0));
  }
  // The zero vector pair lies in the kernel of D.
  const auto space = box(2, 3);
  const qcpn::DiracOperator D(2, 2.0, space);
  const auto d = D.D();
  CHECK(d.b.column(0).empty());
  CHECK(d.c.column(0).empty());
  CHECK_THROWS_AS(qcpn::DiracOperator(2, 0.0, space), std::invalid_argument);
}

TEST_CASE("structure of the truncated triple") {
  for (int n = 1; n <= 3; ++n)
    for (double d : {0.5, 1.0, static_cast<double>(n), 3.7}) {
      const auto checks = qcpn::check_dirac(qcpn::build_dirac(n, d, box(n, 5)));
      CHECK(checks.self_adjoint);
      CHECK(checks.F_involution);
      CHECK(checks.grading_anticommutes);
      CHECK(checks.D_is_abs_times_F);
      CHECK(checks.ok());
    }
}

TEST_CASE("multiplicities") {
  CHECK(qcpn::spectrum_multiplicity(1, 7, 10) == 1);
  CHECK(qcpn::spectrum_multiplicity(2, 3, 5) == 4);
  for (int n = 1; n <= 4; ++n) CHECK(qcpn::spectrum_multiplicity(n, 0, 3) == 1);
  CHECK_THROWS_AS(qcpn::spectrum_multiplicity(2, 6, 5), std::invalid_argument);
  for (int n = 1; n <= 4; ++n) {
    const auto mult = qcpn::multiplicities(n, 12);
    for (int l = 0; l <= 12; ++l) {
      CHECK(mult[static_cast<std::size_t>(l)] == qcpn::spectrum_multiplicity(n, l, 12));
      CHECK(mult[static_cast<std::size_t>(l)] == qcpn::binomial(l + n - 1, n - 1));
    }
    CHECK(qcpn::polynomial_degree(qcpn::multiplicities(n, 20)) == n - 1);
  }
  // The stated formula differs from the count, with the same degree.
  CHECK(qcpn::stated_multiplicity(2, 3) == 5);
  CHECK(qcpn::spectrum_multiplicity(2, 3, 3) == 4);
  const std::string csv = qcpn::spectrum_csv(2, 2);
  CHECK(csv == "lambda,multiplicity\n0,1\n1,2\n2,3\n");
}

TEST_CASE("polynomial degree") {
  CHECK(qcpn::polynomial_degree({0, 0, 0}) == -1);
  CHECK(qcpn::polynomial_degree({5, 5, 5, 5}) == 0);
  CHECK(qcpn::polynomial_degree({0, 1, 4, 9, 16, 25}) == 2);
  CHECK_THROWS_AS(qcpn::polynomial_degree({1, 2, 4, 8}), std::invalid_argument);
}

TEST_CASE("power iteration") {
  const auto space = box(1, 3);
  qcpn::SparseOperator<double> X(space);
  X.add(0, 0, 2.0);
  X.add(1, 0, 1.0);
  X.add(3, 2, -0.5);
  // The largest singular value of [[2],[1]] is sqrt(5).
  const auto est = qcpn::operator_norm(X);
  CHECK(est.converged);
  CHECK(est.norm == doctest::Approx(std::sqrt(5.0)).epsilon(1e-8));
  CHECK(qcpn::operator_norm(qcpn::SparseOperator<double>(space)).norm == 0.0);
}

TEST_CASE("shifts are eigenvectors of [|D|, .]") {
  const qcpn::FloatField field(0.5);
  for (int n = 1; n <= 3; ++n) {
    const auto space = box(n, 5);
    const qcpn::DiracOperator D(n, n, space);
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= k; ++i) {
        const auto z = qcpn::rep_z(field, k, qcpn::z(i), space);
        const auto lhs = qcpn::abs_commutator(D, z);
        const auto rhs = static_cast<double>(k - i) * z;
        CHECK(qcpn::max_abs(lhs - rhs) <= 1e-12);
      }
  }
}

TEST_CASE("commutator norms stabilize") {
  for (const auto& r : qcpn::commutator_norm(1, 1, 1, 0.5, {20, 40, 80})) CHECK(r.estimate.converged);
  const auto norms = qcpn::commutator_norm(1, 1, 1, 0.5, {20, 40, 80});
  CHECK(std::fabs(norms[1].estimate.norm - norms[0].estimate.norm) <= 0.01 * norms[1].estimate.norm);
  CHECK(std::fabs(norms[2].estimate.norm - norms[1].estimate.norm) <= 0.01 * norms[2].estimate.norm);
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) {
      const auto r = qcpn::commutator_norm(2, i, j, 0.5, {20, 40});
      CHECK(r[1].estimate.converged);
      CHECK(std::fabs(r[1].estimate.norm - r[0].estimate.norm) <= 0.01 * r[1].estimate.norm);
    }
  const auto json = qcpn::to_json(norms);
  CHECK(json.size() == 3);
}

TEST_CASE("commutators vanish where the representations do") {
  // pi_+ and pi_- of p_22 vanish on H_1 after pullback, so the commutator does too.
  const qcpn::FredholmModule mu(2, 1, 6);
  CHECK(mu.pi_plus(qcpn::p(2, 2, 2), 0.5).nonzeros() == 0);
  CHECK(mu.pi_minus(qcpn::p(2, 2, 2), 0.5).nonzeros() == 0);
  const qcpn::DiracOperator D(1, 1.0, mu.space());
  const auto plus = mu.pi_plus(qcpn::p(2, 2, 2), 0.5);
  CHECK(qcpn::operator_norm(D.abs() * plus - plus * D.abs()).norm == 0.0);
}

TEST_CASE("summability") {
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6;
  CHECK(std::fabs(qcpn::summability_trace(1, 1, 2, 1000) - zeta2) <= 1e-2);
  // Much larger s than d: Cauchy across doubling.
  const auto fast = qcpn::summability_diagnostic(2, 1, 8, 200);
  CHECK(fast.verdict == qcpn::SummabilityVerdict::kConverging);
  // s below d diverges.
  const auto slow = qcpn::summability_diagnostic(2, 2, 1.5, 200);
  CHECK(slow.verdict == qcpn::SummabilityVerdict::kDiverging);
  CHECK(qcpn::summability_diagnostic(1, 1, 0.5, 100).verdict == qcpn::SummabilityVerdict::kDiverging);
  const auto json = qcpn::to_json(fast);
  CHECK(json["verdict"] == "converging");
}

TEST_CASE("off-diagonal differences decay like q^{m_k}") {
  const double q0 = 0.5;
  for (int n = 1; n <= 2; ++n)
    for (int i = 0; i < n; ++i) {
      const auto profile = qcpn::decay_profile(qcpn::p(n, i, n), n, q0, 24);
      for (int t = 1; t <= 24; ++t) {
        const double vectors = n == 1 ? 1.0 : 2.0 * t + 1.0;
        CHECK(profile.entries[static_cast<std::size_t>(t)] <= 4.0 * vectors * std::pow(q0, t - 1));
      }
    }
}

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qcpn/block.hpp"
#include "qcpn/ncalgebra.hpp"
#include "qcpn/repspace.hpp"

namespace qcpn {

/// The even Fredholm module mu_k pulled back to CP^n_q: H_k + H_k with
/// H_k = l^2(N^k) truncated to a box, representation pi_+ + pi_- of the
/// sphere S^{2k+1}_q, grading diag(1, -1) and F the swap. For k = 0 this is
/// the classical point c -> c + 0 on C + C.
class FredholmModule {
 public:
  FredholmModule(int n, int k, int cutoff);

  int n() const { return n_; }
  int k() const { return k_; }
  const std::shared_ptr<const TruncatedSpace>& space() const { return space_; }

  /// Image of an element of the CP^n_q algebra in the sphere algebra for k.
  NCElement pullback(const NCElement& a) const;
  RawSum pullback(const RawSum& a) const;

  SparseOperator<double> pi_plus(const NCElement& a, double q0) const;
  SparseOperator<double> pi_minus(const NCElement& a, double q0) const;
  /// diag(pi_+(a), pi_-(a)).
  BlockOperator represent(const NCElement& a, double q0) const;

  BlockOperator grading() const { return BlockOperator::grading(space_); }
  BlockOperator F() const { return BlockOperator::swap(space_); }

 private:
  int n_;
  int k_;
  std::shared_ptr<const TruncatedSpace> space_;
};

FredholmModule pullback_module(int k, int n, int cutoff = 16);

/// Contributions of the box to Tr (pi_+ - pi_-)(a) on H_k, grouped by the
/// largest entry of the basis vector: layer t collects the vectors with
/// max(m) = t. Summing the first c + 1 layers gives the trace over the box
/// with cutoff c.
struct TraceLayers {
  std::vector<double> trace;
  double abs_sum = 0;  // sum of |term| over all terms, for the rounding bound
  std::size_t terms = 0;
};

/// `words` are sphere words for S^{2k+1}_q (already pulled back).
TraceLayers trace_layers(const RawSum& words, int k, double q0, int cutoff);

/// Bound on the part of the trace outside the box: C sum_{j=1}^k sum_{t>c}
/// binom(t+j-1, j-1) binom(t, k-j) q0^t with C = (number of words) times the
/// largest |coefficient| at q0. Zero for k = 0.
double tail_bound(const RawSum& words, int k, double q0, int cutoff);

/// Smallest cutoff whose tail bound is below `target`: doubling, then bisection.
int certified_cutoff(const RawSum& words, int k, double q0, double target = 1e-6);

struct TraceResult {
  double value = 0;
  double tail = 0;
  double rounding = 0;  // floating point error bound of the partial sum
  int cutoff = 0;
};

/// Tr over the box of H_k of (pi_+ - pi_-)(a), a in the CP^n_q algebra.
TraceResult trace_difference(const NCElement& a, int k, double q0, int cutoff);
TraceResult trace_difference(int n, const RawSum& a, int k, double q0, int cutoff);

struct PairingResult {
  int n = 0;
  int k = 0;
  int N = 0;  // pairs with P_{-N}
  double q = 0;
  int cutoff = 0;
  double value = 0;
  double tail = 0;
  double rounding = 0;
  long rounded = 0;
  bool certified = false;
};

class UncertifiedPairing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <[mu_k], [P_{-N}]> on CP^n_q. Without a cutoff the smallest one with tail
/// bound below 1e-6 is used.
PairingResult pairing(int n, int k, int N, double q0, std::optional<int> cutoff = std::nullopt);

using IntMatrix = std::vector<std::vector<long>>;

struct PairingMatrix {
  int n = 0;
  double q = 0;
  IntMatrix M;
  IntMatrix inverse;  // (-1)^{i+j} binom(j, i)
  IntMatrix product;  // M * inverse
  std::vector<PairingResult> entries;
  bool unimodular = false;  // product is the identity
};

/// M_ij = <[mu_i], [P_{-j}]> for 0 <= i, j <= n. Throws UncertifiedPairing
/// when an entry cannot be certified.
PairingMatrix pairing_matrix(int n, double q0, std::optional<int> cutoff = std::nullopt);

IntMatrix pairing_inverse(int n);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

/// sum_{k=j}^i (-1)^{j+k} binom(i, k) binom(k, j), exactly.
long alternating_sum_identity(int i, int j);

long binomial(int a, int b);

/// Number of m in N^n with capconstr(k) and m_k = t, by enumeration.
long capconstr_count(int n, int k, int t);
/// binom(t+k-1, k-1) binom(t, n-k).
long capconstr_count_formula(int n, int k, int t);

/// Number of m in N^k with N > m_1 > ... > m_k >= 0, by enumeration of the
/// indices in capconstr(1) below N; the q -> 0 limit of the pairing for k >= 1.
long q_limit_pairing(int N, int k);

/// Layered traces of (pi_+ - pi_-)(a), and the sums of the absolute values of
/// all matrix entries per column, grouped the same way.
struct DecayProfile {
  std::vector<double> trace;
  std::vector<double> entries;
};

DecayProfile decay_profile(const NCElement& a, int k, double q0, int cutoff);

/// Ratio per unit cutoff of the differences over doubling cutoffs. With S the
/// partial sums of `layers` and Q = |S(4c) - S(2c)| / |S(2c) - S(c)|, returns
/// the r solving r^c (1 + r^c) = Q, which is exact for layers r^t. Needs
/// layers up to 4c; returns NaN when a difference vanishes.
double doubling_ratio(const std::vector<double>& layers, int c);

nlohmann::json to_json(const PairingResult& r);
nlohmann::json to_json(const PairingMatrix& m);

}  // namespace qcpn

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcpn/ncalgebra.hpp"

namespace qcpn {

/// Factors under a square root, sorted, without repeats and without 1.
/// The value is the positive square root of the product of the factors.
using Radicand = std::vector<LaurentPoly>;

/// Finite sum sqrt(R) * x_R over radicands R with x_R in the sphere algebra.
///
/// Products combine radicands factor by factor; a factor met twice leaves the
/// root. Distinct radicands are kept apart, so is_zero() is sound but not
/// complete: a sum of surds that cancels through a hidden algebraic relation
/// between different radicands is reported as nonzero.
class RootedElement {
 public:
  explicit RootedElement(int n);
  RootedElement(const NCElement& x);  // NOLINT: rational elements convert implicitly

  /// sqrt(prod under) * body.
  static RootedElement rooted(Radicand under, const NCElement& body);

  int n() const { return n_; }
  const std::map<Radicand, NCElement>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }
  /// Total number of normal words over all parts.
  std::size_t word_count() const;
  /// True when no surd remains.
  bool is_rational() const;
  /// The element itself when rational; throws std::domain_error otherwise.
  NCElement rational() const;

  RootedElement& operator+=(const RootedElement& other);
  RootedElement& operator-=(const RootedElement& other);
  RootedElement operator-() const;
  friend RootedElement operator+(RootedElement a, const RootedElement& b) { return a += b; }
  friend RootedElement operator-(RootedElement a, const RootedElement& b) { return a -= b; }
  friend RootedElement operator*(const RootedElement& a, const RootedElement& b);
  friend RootedElement star(const RootedElement& x);
  friend bool operator==(const RootedElement& a, const RootedElement& b) {
    return a.n_ == b.n_ && a.parts_ == b.parts_;
  }

  std::string to_string() const;

 private:
  void add(const Radicand& r, const NCElement& x);

  int n_;
  std::map<Radicand, NCElement> parts_;
};

RootedElement star(const RootedElement& x);

/// Product of two radicands: the surviving radicand and the rational factor
/// pulled out of the root.
std::pair<Radicand, LaurentPoly> combine_radicands(const Radicand& a, const Radicand& b);

/// All (j_0, ..., j_n) with nonnegative entries summing to N, ascending
/// lexicographically.
std::vector<std::vector<int>> compositions(int N, int n);

struct IsometryComponent {
  std::vector<int> degrees;  // (j_0, ..., j_n)
  RootedElement value;
};

/// Column vector Psi_N (N > 0), Psi_{-N} (N < 0) or Psi_0 = (1).
struct IsometryVector {
  int N = 0;
  int n = 0;
  std::vector<IsometryComponent> components;

  std::size_t size() const { return components.size(); }
};

/// Psi_N for N >= 0.
IsometryVector psi(int N, int n);
/// Psi_{-N} for N >= 0.
IsometryVector psi_neg(int N, int n);
/// Psi_N for signed N.
IsometryVector isometry(int N, int n);

/// Psi^dagger Psi - 1.
RootedElement isometry_defect(const IsometryVector& psi);

class ProjectionMatrix {
 public:
  ProjectionMatrix(int N, int n, std::size_t size);

  int N() const { return N_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }
  RootedElement& at(std::size_t a, std::size_t b) { return entries_[a * size_ + b]; }
  const RootedElement& at(std::size_t a, std::size_t b) const { return entries_[a * size_ + b]; }

 private:
  int N_;
  int n_;
  std::size_t size_;
  std::vector<RootedElement> entries_;
};

/// P = Psi Psi^dagger, entries psi_a star(psi_b).
ProjectionMatrix projection(const IsometryVector& psi);
ProjectionMatrix projection(int N, int n);

/// How P^2 is formed. kDirect multiplies the normalized entries of P;
/// kFactored forms Psi (Psi^dagger Psi) Psi^dagger, which relies on
/// associativity of the normal-form product and is far cheaper at high degree.
enum class SquareMethod { kAuto, kDirect, kFactored };

struct ProjectionReport {
  int N = 0;
  int n = 0;
  std::size_t size = 0;
  SquareMethod method = SquareMethod::kDirect;
  std::size_t isometry_residual_words = 0;     // Psi^dagger Psi - 1
  std::size_t idempotent_residual_words = 0;   // P^2 - P, summed over entries
  std::size_t selfadjoint_residual_words = 0;  // P - P^*, summed over entries
  std::size_t nonzero_entries = 0;             // entries of P^2 - P or P - P^* that do not vanish

  bool ok() const {
    return isometry_residual_words == 0 && idempotent_residual_words == 0 &&
           selfadjoint_residual_words == 0 && nonzero_entries == 0;
  }
};

/// Checks P^2 = P and P = P^* entrywise, squaring P directly.
ProjectionReport verify_projection(const ProjectionMatrix& P);
/// Builds Psi_N and P_N and checks the isometry and projection identities.
/// kAuto squares directly unless the estimated coefficient work exceeds
/// `direct_budget` multiplications.
ProjectionReport verify_projection(int N, int n, SquareMethod method = SquareMethod::kAuto,
                                   double direct_budget = 1e6);

/// Number of coefficient-term multiplications a direct square of P performs, roughly.
double direct_square_cost(const ProjectionMatrix& P);

std::string to_string(SquareMethod method);

/// sum_a q^{2 sum_r r j_r} P_aa, j the multi-degree of row a; for P_1 this is
/// sum_i q^{2i} p_ii. Throws if a diagonal entry is not rational.
NCElement qtrace(const ProjectionMatrix& P);
/// sum_a P_aa.
NCElement matrix_trace(const ProjectionMatrix& P);

/// Tr P_N as a sum of unnormalized words psi_a psi_a^*, read off the
/// component formulas without any rewriting.
RawSum trace_words(int N, int n);

nlohmann::json to_json(const ProjectionMatrix& P);
nlohmann::json to_json(const ProjectionReport& report);

}  // namespace qcpn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcpn/block.hpp"
#include "qcpn/ncalgebra.hpp"

namespace qcpn {

/// D = |D| F on H_n + H_n truncated to a box, with
/// |D||m> = (m_1 + ... + m_n)^{n/d} |m>.
class DiracOperator {
 public:
  DiracOperator(int n, double d, std::shared_ptr<const TruncatedSpace> space);

  int n() const { return n_; }
  double d() const { return d_; }
  const std::shared_ptr<const TruncatedSpace>& space() const { return space_; }
  /// Eigenvalue of |D| on each basis vector.
  const std::vector<double>& abs_values() const { return abs_; }

  SparseOperator<double> abs() const;
  BlockOperator D() const;
  BlockOperator F() const { return BlockOperator::swap(space_); }
  BlockOperator grading() const { return BlockOperator::grading(space_); }

 private:
  int n_;
  double d_;
  std::shared_ptr<const TruncatedSpace> space_;
  std::vector<double> abs_;
};

DiracOperator build_dirac(int n, double d, std::shared_ptr<const TruncatedSpace> space);

struct DiracChecks {
  bool self_adjoint = false;          // D^* = D
  bool F_involution = false;          // F^2 = 1
  bool grading_anticommutes = false;  // gamma D + D gamma = 0 and gamma F + F gamma = 0
  bool D_is_abs_times_F = false;      // D = |D| F
  bool ok() const { return self_adjoint && F_involution && grading_anticommutes && D_is_abs_times_F; }
};

/// Exact structural checks on the truncation.
DiracChecks check_dirac(const DiracOperator& D);

/// Number of m in the box of N^n with m_1 + ... + m_n = lambda, by
/// enumeration. Throws std::invalid_argument when lambda > cutoff, where the
/// box would miss some of them.
long spectrum_multiplicity(int n, int lambda, int cutoff);

/// Multiplicities for lambda = 0..max_lambda by counting compositions
/// coordinate by coordinate.
std::vector<long> multiplicities(int n, int max_lambda);

/// binom(lambda + n, n - 1), as printed in the source formula; reported only.
long stated_multiplicity(int n, int lambda);

/// Degree of the polynomial interpolating values at 0, 1, 2, ... from exact
/// finite differences; -1 for all zeros. Throws when no difference vanishes.
int polynomial_degree(const std::vector<long>& values);

/// |D| X - X |D| for an operator X on one copy of H_n.
SparseOperator<double> abs_commutator(const DiracOperator& D, const SparseOperator<double>& X);

struct NormEstimate {
  double norm = 0;
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double tolerance = 1e-8;  // relative change of the estimate
  int max_iterations = 20000;
  std::uint64_t seed = 12345;
};

/// Largest singular value of X by power iteration on X^T X.
NormEstimate operator_norm(const SparseOperator<double>& X, const PowerIterationOptions& options = {});

struct CommutatorNorm {
  int cutoff = 0;
  NormEstimate estimate;
};

/// ||[D, pi(p_ij)]|| on the truncation to each cutoff, where pi = pi_+ + pi_-
/// on H_n + H_n. [D, pi(a)] is off-diagonal with blocks |D| pi_-(a) -
/// pi_+(a) |D| and |D| pi_+(a) - pi_-(a) |D|; the norm is the larger of theirs.
std::vector<CommutatorNorm> commutator_norm(int n, int i, int j, double q0, const std::vector<int>& cutoffs,
                                            double d = 0, const PowerIterationOptions& options = {});

/// sum_{lambda=1}^{cutoff} mult(lambda) lambda^{-s n/d}.
double summability_trace(int n, double d, double s, int cutoff);

enum class SummabilityVerdict { kConverging, kDiverging, kUndecided };

struct SummabilityReport {
  int n = 0;
  double d = 0;
  double s = 0;
  int cutoff = 0;
  double partial_sum = 0;    // S(4 cutoff)
  double first_step = 0;     // S(2c) - S(c)
  double second_step = 0;    // S(4c) - S(2c)
  SummabilityVerdict verdict = SummabilityVerdict::kUndecided;
};

/// Doubling-cutoff diagnostic: converging when the last step is below
/// `tolerance`, diverging when the steps do not shrink, else undecided.
SummabilityReport summability_diagnostic(int n, double d, double s, int cutoff, double tolerance = 1e-9);

std::string to_string(SummabilityVerdict v);

/// "lambda,multiplicity" rows with a header.
std::string spectrum_csv(int n, int max_lambda);
nlohmann::json to_json(const std::vector<CommutatorNorm>& norms);
nlohmann::json to_json(const SummabilityReport& r);

}  // namespace qcpn

#pragma once

#include "qcpn/repspace.hpp"

namespace qcpn {

/// Operator on H + H over one truncated box, as a 2x2 matrix of blocks
/// [[a, b], [c, d]].
struct BlockOperator {
  SparseOperator<double> a, b, c, d;

  explicit BlockOperator(std::shared_ptr<const TruncatedSpace> space)
      : a(space), b(space), c(space), d(space) {}
  BlockOperator(SparseOperator<double> a_, SparseOperator<double> b_, SparseOperator<double> c_,
                SparseOperator<double> d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static BlockOperator identity(std::shared_ptr<const TruncatedSpace> space);
  /// diag(1, -1).
  static BlockOperator grading(std::shared_ptr<const TruncatedSpace> space);
  /// [[0, 1], [1, 0]].
  static BlockOperator swap(std::shared_ptr<const TruncatedSpace> space);
  /// diag(x, y).
  static BlockOperator diagonal(SparseOperator<double> x, SparseOperator<double> y);

  BlockOperator adjoint() const;
  double max_abs() const;

  friend BlockOperator operator+(const BlockOperator& x, const BlockOperator& y);
  friend BlockOperator operator-(const BlockOperator& x, const BlockOperator& y);
  friend BlockOperator operator*(const BlockOperator& x, const BlockOperator& y);
  friend bool operator==(const BlockOperator& x, const BlockOperator& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

/// Largest absolute entry.
double max_abs(const SparseOperator<double>& x);

}  // namespace qcpn

#include "qcpn/block.hpp"

#include <cmath>

namespace qcpn {

double max_abs(const SparseOperator<double>& x) {
  double out = 0;
  for (std::size_t col = 0; col < x.dimension(); ++col)
    for (const auto& [r, v] : x.column(col)) out = std::max(out, std::fabs(v));
  return out;
}

BlockOperator BlockOperator::identity(std::shared_ptr<const TruncatedSpace> space) {
  auto one = SparseOperator<double>::identity(space);
  SparseOperator<double> zero(space);
  return {one, zero, zero, one};
}

BlockOperator BlockOperator::grading(std::shared_ptr<const TruncatedSpace> space) {
  auto one = SparseOperator<double>::identity(space);
  SparseOperator<double> zero(space);
  return {one, zero, zero, -1.0 * one};
}

BlockOperator BlockOperator::swap(std::shared_ptr<const TruncatedSpace> space) {
  auto one = SparseOperator<double>::identity(space);
  SparseOperator<double> zero(space);
  return {zero, one, one, zero};
}

BlockOperator BlockOperator::diagonal(SparseOperator<double> x, SparseOperator<double> y) {
  SparseOperator<double> zero(x.space_ptr());
  return {std::move(x), zero, zero, std::move(y)};
}

BlockOperator BlockOperator::adjoint() const { return {a.adjoint(), c.adjoint(), b.adjoint(), d.adjoint()}; }

double BlockOperator::max_abs() const {
  return std::max({qcpn::max_abs(a), qcpn::max_abs(b), qcpn::max_abs(c), qcpn::max_abs(d)});
}

BlockOperator operator+(const BlockOperator& x, const BlockOperator& y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

BlockOperator operator-(const BlockOperator& x, const BlockOperator& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

BlockOperator operator*(const BlockOperator& x, const BlockOperator& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

}  // namespace qcpn

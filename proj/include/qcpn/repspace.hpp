#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcpn/ncalgebra.hpp"
#include "qcpn/surd.hpp"

namespace qcpn {

/// (m_1, ..., m_n), stored zero-based; m_0 := 0 is implicit.
using MultiIndex = std::vector<int>;

enum class ConstraintKind { kM, kCap };

/// kM: 0 <= m_1 <= ... <= m_k, m_{k+1} > ... > m_n >= 0.
/// kCap (1 <= k <= n): 0 <= m_1 <= ... <= m_k, m_k > m_{k+1} > ... > m_n >= 0.
struct ConstraintSet {
  ConstraintKind kind = ConstraintKind::kM;
  int k = 0;
};

bool in_mconstr(const MultiIndex& m, int k);
bool in_capconstr(const MultiIndex& m, int k);
bool in_constraint(const MultiIndex& m, const ConstraintSet& c);

/// The box m_i <= cutoff in l^2(N^n), ordered lexicographically with m_1
/// most significant. Basis vectors are computed from their position, so the
/// space stores no list.
class TruncatedSpace {
 public:
  TruncatedSpace(int n, int cutoff);

  int n() const { return n_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return size_; }

  MultiIndex basis(std::size_t index) const;
  std::optional<std::size_t> index(const MultiIndex& m) const;
  bool contains(const MultiIndex& m) const;
  /// Every entry at most cutoff - depth.
  bool is_interior(const MultiIndex& m, int depth = 1) const;
  bool is_interior(std::size_t index, int depth = 1) const { return is_interior(basis(index), depth); }

  friend bool operator==(const TruncatedSpace& a, const TruncatedSpace& b) {
    return a.n_ == b.n_ && a.cutoff_ == b.cutoff_;
  }

 private:
  int n_;
  int cutoff_;
  std::size_t size_;
};

/// q^{q_power} * prod_j sqrt(1 - q^{2j}), independent of the value of q.
struct Weight {
  int q_power = 0;
  std::vector<int> roots;  // the j's; every j >= 1

  Weight& operator*=(const Weight& other);
};

/// The image of one basis vector under one generator: a single basis vector
/// with a weight.
struct Step {
  MultiIndex target;
  Weight weight;
};

/// pi^{(n)}_k(g)|m>, untruncated. Returns nothing when the image is zero.
std::optional<Step> act(int k, Generator g, const MultiIndex& m);

/// Allocation-free form of act for hot loops. On success moves `m` to the
/// target and returns the weight as q^{q_power} sqrt(1 - q^{2 root}), with
/// root = 0 meaning no square root factor. Returns false when the image is zero.
bool act_in_place(int k, Generator g, MultiIndex& m, int& q_power, int& root);

/// pi^{(n)}_k(w)|m>, letters applied right to left, untruncated.
std::optional<Step> act(int k, const Word& w, const MultiIndex& m);

/// Floating point evaluation at 0 < q < 1.
class FloatField {
 public:
  using Scalar = double;
  explicit FloatField(double q);

  double q() const { return q_; }
  double eval(const Weight& w) const;
  double coefficient(const LaurentPoly& p) const { return p.eval(q_); }
  static bool is_zero(double x) { return x == 0.0; }
  static double magnitude(double x) { return std::fabs(x); }

 private:
  double q_;
};

/// Exact evaluation at a rational 0 < q < 1; entries are SurdNumbers.
class ExactField {
 public:
  using Scalar = SurdNumber;
  explicit ExactField(const Rational& q);

  const Rational& q() const { return q_; }
  SurdNumber eval(const Weight& w) const;
  SurdNumber coefficient(const LaurentPoly& p) const { return SurdNumber(p.eval(q_)); }
  static bool is_zero(const SurdNumber& x) { return x.is_zero(); }
  static double magnitude(const SurdNumber& x) { return std::fabs(x.to_double()); }

 private:
  Rational q_;
};

/// Sparse matrix on a TruncatedSpace, stored by columns: entry (row, col) is
/// <row| A |col>.
template <class Scalar>
class SparseOperator {
 public:
  using Column = std::vector<std::pair<std::size_t, Scalar>>;  // sorted by row

  explicit SparseOperator(std::shared_ptr<const TruncatedSpace> space)
      : space_(std::move(space)), columns_(space_->size()) {}

  const TruncatedSpace& space() const { return *space_; }
  const std::shared_ptr<const TruncatedSpace>& space_ptr() const { return space_; }
  std::size_t dimension() const { return columns_.size(); }
  const Column& column(std::size_t col) const { return columns_[col]; }

  std::size_t nonzeros() const {
    std::size_t total = 0;
    for (const auto& c : columns_) total += c.size();
    return total;
  }

  Scalar entry(std::size_t row, std::size_t col) const {
    for (const auto& [r, v] : columns_[col])
      if (r == row) return v;
    return Scalar(0);
  }

  /// Adds v at (row, col).
  void add(std::size_t row, std::size_t col, const Scalar& v) {
    auto& c = columns_[col];
    auto it = std::lower_bound(c.begin(), c.end(), row,
                               [](const auto& e, std::size_t r) { return e.first < r; });
    if (it != c.end() && it->first == row) {
      it->second += v;
      if (is_zero_scalar(it->second)) c.erase(it);
    } else if (!is_zero_scalar(v)) {
      c.insert(it, {row, v});
    }
  }

  SparseOperator& operator+=(const SparseOperator& other) {
    check_space(other);
    for (std::size_t col = 0; col < columns_.size(); ++col)
      for (const auto& [r, v] : other.columns_[col]) add(r, col, v);
    return *this;
  }

  SparseOperator& operator-=(const SparseOperator& other) {
    check_space(other);
    for (std::size_t col = 0; col < columns_.size(); ++col)
      for (const auto& [r, v] : other.columns_[col]) add(r, col, -v);
    return *this;
  }

  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }

  friend SparseOperator operator*(const Scalar& s, const SparseOperator& a) {
    SparseOperator out(a.space_);
    if (is_zero_scalar(s)) return out;
    for (std::size_t col = 0; col < a.columns_.size(); ++col)
      for (const auto& [r, v] : a.columns_[col]) out.add(r, col, s * v);
    return out;
  }

  /// Matrix product a * b.
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    a.check_space(b);
    SparseOperator out(a.space_);
    for (std::size_t col = 0; col < b.columns_.size(); ++col)
      for (const auto& [mid, vb] : b.columns_[col])
        for (const auto& [r, va] : a.columns_[mid]) out.add(r, col, va * vb);
    return out;
  }

  /// Transpose; entries are real.
  SparseOperator adjoint() const {
    SparseOperator out(space_);
    for (std::size_t col = 0; col < columns_.size(); ++col)
      for (const auto& [r, v] : columns_[col]) out.columns_[r].push_back({col, v});
    return out;
  }

  friend bool operator==(const SparseOperator& a, const SparseOperator& b) {
    return *a.space_ == *b.space_ && a.columns_ == b.columns_;
  }

  static SparseOperator identity(std::shared_ptr<const TruncatedSpace> space) {
    SparseOperator out(space);
    for (std::size_t i = 0; i < out.columns_.size(); ++i) out.columns_[i].push_back({i, Scalar(1)});
    return out;
  }

 private:
  static bool is_zero_scalar(const Scalar& v) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return v == 0.0;
    } else {
      return v.is_zero();
    }
  }

  void check_space(const SparseOperator& other) const {
    if (!(*space_ == *other.space_)) throw std::invalid_argument("operators on different spaces");
  }

  std::shared_ptr<const TruncatedSpace> space_;
  std::vector<Column> columns_;
};

/// Largest |entry| in rows and columns whose basis vectors are interior.
template <class Scalar>
double max_abs_on_interior(const SparseOperator<Scalar>& a, int depth) {
  double worst = 0;
  const auto& space = a.space();
  for (std::size_t col = 0; col < a.dimension(); ++col) {
    if (!space.is_interior(col, depth)) continue;
    for (const auto& [r, v] : a.column(col)) {
      double m;
      if constexpr (std::is_same_v<Scalar, double>) {
        m = std::fabs(v);
      } else {
        m = std::fabs(v.to_double());
      }
      if (space.is_interior(r, depth)) worst = std::max(worst, m);
    }
  }
  return worst;
}

/// Number of nonzero entries with interior row and column.
template <class Scalar>
std::size_t nonzeros_on_interior(const SparseOperator<Scalar>& a, int depth) {
  std::size_t count = 0;
  const auto& space = a.space();
  for (std::size_t col = 0; col < a.dimension(); ++col) {
    if (!space.is_interior(col, depth)) continue;
    for (const auto& [r, v] : a.column(col))
      if (space.is_interior(r, depth)) ++count;
  }
  return count;
}

/// Matrix of pi^{(n)}_k(w) compressed to the box: a path that leaves the box
/// contributes nothing. The empty word gives the identity.
template <class Field>
SparseOperator<typename Field::Scalar> rep_word(const Field& field, int k, const Word& w,
                                                std::shared_ptr<const TruncatedSpace> space) {
  SparseOperator<typename Field::Scalar> out(space);
  for (std::size_t col = 0; col < space->size(); ++col) {
    MultiIndex m = space->basis(col);
    Weight total;
    bool alive = true;
    for (auto it = w.rbegin(); it != w.rend() && alive; ++it) {
      auto step = act(k, *it, m);
      if (!step || !space->contains(step->target)) {
        alive = false;
        break;
      }
      m = std::move(step->target);
      total *= step->weight;
    }
    if (alive) out.add(*space->index(m), col, field.eval(total));
  }
  return out;
}

template <class Field>
SparseOperator<typename Field::Scalar> rep_z(const Field& field, int k, Generator g,
                                             std::shared_ptr<const TruncatedSpace> space) {
  return rep_word(field, k, Word{g}, std::move(space));
}

/// Projection onto the span of the basis vectors of V^n_k in the box.
template <class Field>
SparseOperator<typename Field::Scalar> support_projector(const Field&, int k,
                                                         std::shared_ptr<const TruncatedSpace> space) {
  SparseOperator<typename Field::Scalar> out(space);
  for (std::size_t i = 0; i < space->size(); ++i)
    if (in_mconstr(space->basis(i), k)) out.add(i, i, typename Field::Scalar(1));
  return out;
}

/// pi^{(n)}_k of a sum of raw words. pi_k is unital on V^n_k only, so the
/// empty word maps to the support projector.
template <class Field>
SparseOperator<typename Field::Scalar> represent(const Field& field, int k, const RawSum& raw,
                                                 std::shared_ptr<const TruncatedSpace> space) {
  SparseOperator<typename Field::Scalar> out(space);
  for (const auto& [c, w] : raw) {
    const auto coeff = field.coefficient(c);
    if (Field::is_zero(coeff)) continue;
    if (w.empty()) {
      out += coeff * support_projector(field, k, space);
    } else {
      out += coeff * rep_word(field, k, w, space);
    }
  }
  return out;
}

template <class Field>
SparseOperator<typename Field::Scalar> represent(const Field& field, int k, const NCElement& x,
                                                 std::shared_ptr<const TruncatedSpace> space) {
  return represent(field, k, to_raw(x), std::move(space));
}

/// The displayed matrix elements of pi^{(n)}_k(p_ij), i <= j, as weights.
/// Returns nothing when the image of |m> is zero.
std::optional<Step> act_p(int k, int i, int j, const MultiIndex& m);

/// pi^{(n)}_k(p_ij) for i <= j from the displayed case formulas.
template <class Field>
SparseOperator<typename Field::Scalar> rep_p(const Field& field, int k, int i, int j,
                                             std::shared_ptr<const TruncatedSpace> space) {
  SparseOperator<typename Field::Scalar> out(space);
  for (std::size_t col = 0; col < space->size(); ++col) {
    auto step = act_p(k, i, j, space->basis(col));
    if (!step) continue;
    if (auto row = space->index(step->target)) out.add(*row, col, field.eval(step->weight));
  }
  return out;
}

enum class Parity { kEven, kOdd };

/// pi_+ (even k) or pi_- (odd k): the sum of pi^{(n)}_k over 0 <= k <= n of that parity.
template <class Field>
SparseOperator<typename Field::Scalar> represent_pm(const Field& field, Parity parity, const RawSum& raw,
                                                    std::shared_ptr<const TruncatedSpace> space) {
  SparseOperator<typename Field::Scalar> out(space);
  for (int k = parity == Parity::kEven ? 0 : 1; k <= space->n(); k += 2)
    out += represent(field, k, raw, space);
  return out;
}

template <class Field>
SparseOperator<typename Field::Scalar> represent_pm(const Field& field, Parity parity, const NCElement& x,
                                                    std::shared_ptr<const TruncatedSpace> space) {
  return represent_pm(field, parity, to_raw(x), std::move(space));
}

struct RepresentedResidual {
  std::string family;
  std::vector<int> indices;
  int k = 0;
  std::size_t interior_nonzeros = 0;  // nonzero entries of LHS - RHS between interior vectors
  double max_abs = 0;                 // largest such entry
};

/// Represents both sides of every sphere relation at every level k and
/// compares them on interior vectors (depth 2 covers words of length two).
template <class Field>
std::vector<RepresentedResidual> represented_relation_residuals(const Field& field,
                                                                std::shared_ptr<const TruncatedSpace> space,
                                                                int depth = 2) {
  std::vector<RepresentedResidual> out;
  const int n = space->n();
  for (const auto& relation : sphere_relations(n)) {
    for (int k = 0; k <= n; ++k) {
      const auto residual = represent(field, k, relation.raw, space);
      out.push_back({relation.family, relation.indices, k, nonzeros_on_interior(residual, depth),
                     max_abs_on_interior(residual, depth)});
    }
  }
  return out;
}

/// Coordinate list export with the basis as header.
nlohmann::json to_json(const SparseOperator<double>& a);
nlohmann::json to_json(const SparseOperator<SurdNumber>& a);
std::string to_text(const SparseOperator<double>& a);

}  // namespace qcpn

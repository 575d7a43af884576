#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcpn/qpoly.hpp"

namespace qcpn {

/// One of z_0..z_n or z_0*..z_n*.
struct Generator {
  int index = 0;
  bool starred = false;

  friend auto operator<=>(const Generator&, const Generator&) = default;
};

inline Generator z(int i) { return {i, false}; }
inline Generator zstar(int i) { return {i, true}; }

using Word = std::vector<Generator>;

Word adjoint(const Word& w);
std::string to_string(const Word& w);

/// A normal word z_0^{up_0} ... z_n^{up_n} z_n*^{down_n} ... z_0*^{down_0}.
///
/// Unstarred letters come first in ascending index order, starred letters
/// follow in descending order, and z_n z_n* never occurs (up_n * down_n == 0).
/// The adjoint of a normal word is the normal word with up and down swapped.
struct Monomial {
  std::vector<int> up;
  std::vector<int> down;

  static Monomial unit(int n);
  int degree() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Orders by total degree, then lexicographically; fixes the printing order.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using Terms = std::map<Monomial, LaurentPoly, MonomialLess>;

Word to_word(const Monomial& m);

class NormalizationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The coordinate algebra of the quantum sphere S^{2n+1}_q as a rewriting
/// system on normal words. One shared instance per n; the memo table is
/// guarded internally so instances may be used from several threads.
class SphereAlgebra {
 public:
  static std::shared_ptr<const SphereAlgebra> get(int n);

  int n() const { return n_; }

  /// Normal form of (normal word m) * g.
  Terms times(const Monomial& m, Generator g) const;
  /// Adds c * (normal form of a * b) to `out`.
  void add_product(Terms& out, const Monomial& a, const Monomial& b, const LaurentPoly& c) const;

  std::size_t cache_size() const;

 private:
  explicit SphereAlgebra(int n) : n_(n) {}

  using Key = std::vector<int>;

  const Terms& times_impl(const Monomial& m, Generator g, int depth) const;
  const Terms& reduce_impl(const Monomial& m, int depth) const;
  const Terms& product_impl(const Monomial& a, const Monomial& b) const;
  Terms append_plain(const Monomial& m, int j, int depth) const;
  Terms append_star(const Monomial& m, int j, int depth) const;
  Terms times_terms(const Terms& terms, Generator g, int depth) const;
  void set_budget(int degree) const;
  void check_budget(int depth) const;

  int n_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Key, Terms> cache_;
  mutable std::map<Key, Terms> products_;
  mutable int budget_ = 0;
  mutable int budget_degree_ = 0;
};

/// Finite sum of normal words with Laurent-polynomial coefficients, an element
/// of the sphere algebra for a fixed n. Coefficients are real (q is real), so
/// the involution acts on words only.
class NCElement {
 public:
  explicit NCElement(int n);

  static NCElement one(int n);
  static NCElement scalar(int n, const LaurentPoly& c);
  static NCElement generator(int n, Generator g);
  /// Normal form of c * w.
  static NCElement word(int n, const Word& w, const LaurentPoly& c = 1);
  /// Parses e.g. "z0 z1* + (q^2 - 1) z2 z2*"; the result is normalized.
  static NCElement parse(int n, std::string_view text);

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of the given normal word.
  LaurentPoly coefficient(const Monomial& m) const;

  NCElement& operator+=(const NCElement& other);
  NCElement& operator-=(const NCElement& other);
  NCElement operator-() const;
  friend NCElement operator+(NCElement a, const NCElement& b) { return a += b; }
  friend NCElement operator-(NCElement a, const NCElement& b) { return a -= b; }
  friend NCElement operator*(const NCElement& a, const NCElement& b);
  friend NCElement operator*(const LaurentPoly& c, const NCElement& x);
  NCElement times(Generator g) const;
  friend NCElement star(const NCElement& x);

  friend bool operator==(const NCElement& a, const NCElement& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void check_same_algebra(const NCElement& other) const;
  void add(const Monomial& m, const LaurentPoly& c);

  int n_;
  std::shared_ptr<const SphereAlgebra> algebra_;
  Terms terms_;
};

/// Involutive anti-automorphism; z_i <-> z_i*.
NCElement star(const NCElement& x);

/// p_ij = z_i* z_j in normal form.
NCElement p(int n, int i, int j);

/// Sum of scaled raw (not necessarily normal) words.
using RawSum = std::vector<std::pair<LaurentPoly, Word>>;

NCElement normalize(int n, const RawSum& raw);
RawSum to_raw(const NCElement& x);

/// The morphism A(S^{2n+1}_q) -> A(S^{2n-1}_q), z_n -> 0.
NCElement drop_top_generator(const NCElement& x);
/// Applies drop_top_generator until the ambient index is `level`.
NCElement restrict_to_level(const NCElement& x, int level);
/// Same morphism on raw sums: words touching z_m, m > level, vanish.
RawSum restrict_to_level(const RawSum& raw, int level);

struct RelationCheck {
  std::string family;
  std::vector<int> indices;
  NCElement residual;
};

/// LHS - RHS of one defining relation, as written (not normalized).
struct RawRelation {
  std::string family;
  std::vector<int> indices;
  RawSum raw;
};

/// Every defining relation of A(S^{2n+1}_q): families a, a* (the adjoint of
/// a), b, c, d and the sphere relation e.
std::vector<RawRelation> sphere_relations(int n);

/// LHS - RHS of every defining relation of A(S^{2n+1}_q), normalized.
std::vector<RelationCheck> sphere_relation_residuals(int n);

/// The three commutation families of the projective space generators.
enum class CpFamily { kCommuting = 1, kChained = 2, kInverse = 3 };

/// Residual of one instance. kCommuting uses (i,j,k,l) with i != l, j != k;
/// kChained uses (i,j,k) with i != k; kInverse uses (i,j) with i != j.
/// Throws std::invalid_argument on excluded index tuples.
NCElement cp_relation_residual(int n, CpFamily family, std::vector<int> indices);

struct CpRelationReport {
  int n = 0;
  std::size_t checked = 0;
  std::array<std::size_t, 3> checked_per_family{};
  std::vector<RelationCheck> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks all admissible tuples when there are at most `sample_budget` of
/// them per family, otherwise a seeded sample of that size.
CpRelationReport verify_cp_relations(int n, std::size_t sample_budget = 1u << 20,
                                     std::uint64_t seed = 1);

}  // namespace qcpn

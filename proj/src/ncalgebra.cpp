#include "qcpn/ncalgebra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>

namespace qcpn {

Word adjoint(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& g : out) g.starred = !g.starred;
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += 'z' + std::to_string(w[i].index);
    if (w[i].starred) out += '*';
  }
  return out;
}

Monomial Monomial::unit(int n) {
  return {std::vector<int>(static_cast<std::size_t>(n + 1), 0),
          std::vector<int>(static_cast<std::size_t>(n + 1), 0)};
}

int Monomial::degree() const {
  return std::accumulate(up.begin(), up.end(), 0) + std::accumulate(down.begin(), down.end(), 0);
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  if (a.up != b.up) return a.up > b.up;
  return a.down > b.down;
}

Word to_word(const Monomial& m) {
  Word w;
  const int n = static_cast<int>(m.up.size()) - 1;
  for (int i = 0; i <= n; ++i) w.insert(w.end(), static_cast<std::size_t>(m.up[i]), z(i));
  for (int i = n; i >= 0; --i) w.insert(w.end(), static_cast<std::size_t>(m.down[i]), zstar(i));
  return w;
}

// ---------------------------------------------------------------------------
// SphereAlgebra

std::shared_ptr<const SphereAlgebra> SphereAlgebra::get(int n) {
  if (n < 0) throw std::invalid_argument("SphereAlgebra: negative n");
  static std::mutex registry_mu;
  static std::map<int, std::shared_ptr<const SphereAlgebra>> registry;
  std::lock_guard lock(registry_mu);
  auto& slot = registry[n];
  if (!slot) slot = std::shared_ptr<const SphereAlgebra>(new SphereAlgebra(n));
  return slot;
}

std::size_t SphereAlgebra::cache_size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

Terms SphereAlgebra::times(const Monomial& m, Generator g) const {
  if (g.index < 0 || g.index > n_)
    throw std::out_of_range("generator index " + std::to_string(g.index) + " outside 0.." +
                            std::to_string(n_));
  std::lock_guard lock(mu_);
  set_budget(m.degree() + 1);
  return times_impl(m, g, 0);
}

// Recursion depth is bounded by a polynomial in the degree of the top-level
// request; exceeding it means the orientation does not terminate.
void SphereAlgebra::set_budget(int degree) const {
  const int length = degree + 2;
  budget_degree_ = degree;
  budget_ = length * length * (n_ + 1);
}

void SphereAlgebra::check_budget(int depth) const {
  if (depth > budget_)
    throw NormalizationBudgetExceeded("rewrite budget exceeded at degree " +
                                      std::to_string(budget_degree_));
}

namespace {

std::vector<int> make_key(int code, const Monomial& m) {
  std::vector<int> key;
  key.reserve(1 + m.up.size() + m.down.size());
  key.push_back(code);
  key.insert(key.end(), m.up.begin(), m.up.end());
  key.insert(key.end(), m.down.begin(), m.down.end());
  return key;
}

void add_into(Terms& into, const Monomial& m, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = into.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

void add_into(Terms& into, const Terms& from, const LaurentPoly& scale) {
  for (const auto& [m, c] : from) add_into(into, m, scale.is_one() ? c : c * scale);
}

int sum_above(const std::vector<int>& v, int i) {
  return std::accumulate(v.begin() + i + 1, v.end(), 0);
}

int sum_below(const std::vector<int>& v, int i) {
  return std::accumulate(v.begin(), v.begin() + i, 0);
}

}  // namespace

const Terms& SphereAlgebra::times_impl(const Monomial& m, Generator g, int depth) const {
  const int code = 2 * g.index + (g.starred ? 1 : 0);
  auto key = make_key(code, m);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  check_budget(depth);
  Terms result = g.starred ? append_star(m, g.index, depth + 1) : append_plain(m, g.index, depth + 1);
  return cache_.emplace(std::move(key), std::move(result)).first->second;
}

Terms SphereAlgebra::times_terms(const Terms& terms, Generator g, int depth) const {
  Terms out;
  for (const auto& [m, c] : terms) add_into(out, times_impl(m, g, depth), c);
  return out;
}

// m * z_j: z_j travels left through the starred block, then sorts into the
// unstarred block.
Terms SphereAlgebra::append_plain(const Monomial& m, int j, int depth) const {
  int last = -1;  // index of the rightmost starred letter (smallest index present)
  for (int i = 0; i <= n_; ++i) {
    if (m.down[i] > 0) {
      last = i;
      break;
    }
  }
  if (last < 0) {
    Monomial out = m;
    out.up[j] += 1;
    return Terms{{out, LaurentPoly::q(sum_above(m.up, j))}};
  }
  Monomial shorter = m;
  shorter.down[last] -= 1;
  Terms result;
  if (last != j) {
    // z_i* z_j = q z_j z_i*
    add_into(result, times_terms(times_impl(shorter, z(j), depth), zstar(last), depth),
               LaurentPoly::q(1));
  } else {
    // z_j* z_j = z_j z_j* + (1 - q^2) sum_{l>j} z_l z_l*
    add_into(result, times_terms(times_impl(shorter, z(j), depth), zstar(j), depth), 1);
    const LaurentPoly gap = LaurentPoly(1) - LaurentPoly::q(2);
    for (int l = j + 1; l <= n_; ++l)
      add_into(result, times_terms(times_impl(shorter, z(l), depth), zstar(l), depth), gap);
  }
  return result;
}

// m * z_j*: z_j* sorts into the descending starred block; z_n z_n* is then
// eliminated with the sphere relation.
Terms SphereAlgebra::append_star(const Monomial& m, int j, int depth) const {
  Monomial out = m;
  out.down[j] += 1;
  const LaurentPoly factor = LaurentPoly::q(sum_below(m.down, j));
  if (j == n_ && out.up[n_] > 0) {
    Terms result;
    add_into(result, reduce_impl(out, depth), factor);
    return result;
  }
  return Terms{{out, factor}};
}

// U z_n z_n* S = U S - sum_{i<n} U z_i z_i* S, recursively until up_n * down_n == 0.
const Terms& SphereAlgebra::reduce_impl(const Monomial& m, int depth) const {
  if (m.up[n_] == 0 || m.down[n_] == 0)
    throw std::logic_error("reduce_impl called on a reduced monomial");
  auto key = make_key(-1, m);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  check_budget(depth);
  Monomial base = m;
  base.up[n_] -= 1;
  base.down[n_] -= 1;
  Terms result;
  const auto add_reduced = [&](const Monomial& w, const LaurentPoly& c) {
    if (w.up[n_] > 0 && w.down[n_] > 0) {
      add_into(result, reduce_impl(w, depth + 1), c);
    } else {
      add_into(result, w, c);
    }
  };
  add_reduced(base, 1);
  for (int i = 0; i < n_; ++i) {
    Monomial w = base;
    w.up[i] += 1;
    w.down[i] += 1;
    add_reduced(w, -LaurentPoly::q(sum_above(base.up, i) + sum_above(base.down, i)));
  }
  return cache_.emplace(std::move(key), std::move(result)).first->second;
}

void SphereAlgebra::add_product(Terms& out, const Monomial& a, const Monomial& b,
                                const LaurentPoly& c) const {
  std::lock_guard lock(mu_);
  set_budget(a.degree() + b.degree());
  add_into(out, product_impl(a, b), c);
}

// a * b, peeling the last letter off b; every prefix of a normal word is normal.
const Terms& SphereAlgebra::product_impl(const Monomial& a, const Monomial& b) const {
  Key key = make_key(0, a);
  key.insert(key.end(), b.up.begin(), b.up.end());
  key.insert(key.end(), b.down.begin(), b.down.end());
  if (auto it = products_.find(key); it != products_.end()) return it->second;
  Monomial prefix = b;
  Generator last{-1, false};
  for (int i = 0; i <= n_ && last.index < 0; ++i) {
    if (prefix.down[i] > 0) {
      prefix.down[i] -= 1;
      last = zstar(i);
    }
  }
  for (int i = n_; i >= 0 && last.index < 0; --i) {
    if (prefix.up[i] > 0) {
      prefix.up[i] -= 1;
      last = z(i);
    }
  }
  Terms result = last.index < 0 ? Terms{{a, LaurentPoly(1)}}
                                : times_terms(product_impl(a, prefix), last, 0);
  return products_.emplace(std::move(key), std::move(result)).first->second;
}

// ---------------------------------------------------------------------------
// NCElement

NCElement::NCElement(int n) : n_(n), algebra_(SphereAlgebra::get(n)) {}

NCElement NCElement::one(int n) { return scalar(n, 1); }

NCElement NCElement::scalar(int n, const LaurentPoly& c) {
  NCElement x(n);
  x.add(Monomial::unit(n), c);
  return x;
}

NCElement NCElement::generator(int n, Generator g) { return word(n, Word{g}); }

NCElement NCElement::word(int n, const Word& w, const LaurentPoly& c) {
  NCElement x = scalar(n, c);
  for (const auto& g : w) x = x.times(g);
  return x;
}

LaurentPoly NCElement::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? LaurentPoly() : it->second;
}

void NCElement::add(const Monomial& m, const LaurentPoly& c) { add_into(terms_, m, c); }

void NCElement::check_same_algebra(const NCElement& other) const {
  if (other.n_ != n_)
    throw std::invalid_argument("mismatched ambient algebras: n=" + std::to_string(n_) +
                                " and n=" + std::to_string(other.n_));
}

NCElement& NCElement::operator+=(const NCElement& other) {
  check_same_algebra(other);
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

NCElement& NCElement::operator-=(const NCElement& other) {
  check_same_algebra(other);
  for (const auto& [m, c] : other.terms_) add(m, -c);
  return *this;
}

NCElement NCElement::operator-() const {
  NCElement x = *this;
  for (auto& [m, c] : x.terms_) c = -c;
  return x;
}

NCElement NCElement::times(Generator g) const {
  NCElement out(n_);
  for (const auto& [m, c] : terms_) add_into(out.terms_, algebra_->times(m, g), c);
  return out;
}

NCElement operator*(const NCElement& a, const NCElement& b) {
  a.check_same_algebra(b);
  NCElement out(a.n_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) a.algebra_->add_product(out.terms_, ma, mb, ca * cb);
  return out;
}

NCElement operator*(const LaurentPoly& c, const NCElement& x) {
  NCElement out(x.n_);
  if (c.is_zero()) return out;
  for (const auto& [m, coeff] : x.terms_) out.terms_.emplace_hint(out.terms_.end(), m, coeff * c);
  return out;
}

std::string NCElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const Word w = to_word(m);
    const std::string letters = qcpn::to_string(w);
    if (c.is_one()) {
      out += first ? letters : " + " + letters;
    } else if ((-c).is_one()) {
      out += first ? "-" + letters : " - " + letters;
    } else {
      if (!first) out += " + ";
      out += "(" + c.to_string() + ")";
      if (!w.empty()) out += " " + letters;
    }
    first = false;
  }
  return out;
}

namespace {

class ElementScanner {
 public:
  ElementScanner(int n, std::string_view text) : n_(n), text_(text) {}

  NCElement parse() {
    NCElement result(n_);
    skip();
    if (done()) fail("empty expression");
    bool first = true;
    while (!done()) {
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      NCElement term = parse_term();
      result += negative ? -term : term;
      first = false;
      skip();
    }
    return result;
  }

 private:
  NCElement parse_term() {
    LaurentPoly coefficient = 1;
    Word w;
    bool any = false;
    while (!done() && peek() != '+' && peek() != '-') {
      if (peek() == '(') {
        const std::size_t close = text_.find(')', pos_);
        if (close == std::string_view::npos) fail("unbalanced '('");
        coefficient *= LaurentPoly::parse(text_.substr(pos_ + 1, close - pos_ - 1));
        pos_ = close + 1;
      } else if (peek() == 'z') {
        ++pos_;
        const std::size_t start = pos_;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected a generator index after 'z'");
        const int index = std::stoi(std::string(text_.substr(start, pos_ - start)));
        if (index > n_) fail("generator index " + std::to_string(index) + " exceeds n");
        bool starred = false;
        if (!done() && peek() == '*') {
          starred = true;
          ++pos_;
        }
        w.push_back({index, starred});
      } else if (peek() == 'q' || std::isdigit(static_cast<unsigned char>(peek()))) {
        const std::size_t start = pos_;
        while (!done() && peek() != 'z' && peek() != '(' && peek() != '+' &&
               !(peek() == '-' && pos_ > start && text_[pos_ - 1] != '^'))
          ++pos_;
        coefficient *= LaurentPoly::parse(text_.substr(start, pos_ - start));
      } else {
        fail(std::string("unexpected character '") + peek() + "'");
      }
      any = true;
      skip();
    }
    if (!any) fail("empty term");
    return NCElement::word(n_, w, coefficient);
  }

  void skip() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("NCElement::parse: " + what + " at offset " +
                                std::to_string(pos_));
  }

  int n_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NCElement NCElement::parse(int n, std::string_view text) { return ElementScanner(n, text).parse(); }

NCElement star(const NCElement& x) {
  NCElement out(x.n());
  for (const auto& [m, c] : x.terms()) out.terms_.emplace(Monomial{m.down, m.up}, c);
  return out;
}

NCElement p(int n, int i, int j) {
  if (i < 0 || j < 0 || i > n || j > n)
    throw std::out_of_range("p(" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside 0.." + std::to_string(n));
  return NCElement::word(n, {zstar(i), z(j)});
}

NCElement normalize(int n, const RawSum& raw) {
  NCElement out(n);
  for (const auto& [c, w] : raw) out += NCElement::word(n, w, c);
  return out;
}

RawSum to_raw(const NCElement& x) {
  RawSum raw;
  raw.reserve(x.size());
  for (const auto& [m, c] : x.terms()) raw.emplace_back(c, to_word(m));
  return raw;
}

NCElement drop_top_generator(const NCElement& x) {
  const int n = x.n();
  if (n == 0) throw std::invalid_argument("drop_top_generator: n = 0 has no lower algebra");
  NCElement out(n - 1);
  for (const auto& [m, c] : x.terms()) {
    if (m.up[n] > 0 || m.down[n] > 0) continue;
    Monomial lower{std::vector<int>(m.up.begin(), m.up.end() - 1),
                   std::vector<int>(m.down.begin(), m.down.end() - 1)};
    out += NCElement::word(n - 1, to_word(lower), c);
  }
  return out;
}

NCElement restrict_to_level(const NCElement& x, int level) {
  if (level < 0 || level > x.n()) throw std::out_of_range("restrict_to_level: bad level");
  NCElement out = x;
  while (out.n() > level) out = drop_top_generator(out);
  return out;
}

RawSum restrict_to_level(const RawSum& raw, int level) {
  RawSum out;
  for (const auto& [c, w] : raw) {
    const bool survives =
        std::all_of(w.begin(), w.end(), [level](const Generator& g) { return g.index <= level; });
    if (survives) out.emplace_back(c, w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relation suites

std::vector<RawRelation> sphere_relations(int n) {
  std::vector<RawRelation> out;
  const LaurentPoly gap = LaurentPoly(1) - LaurentPoly::q(2);
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      out.push_back({"a", {i, j}, {{1, {z(i), z(j)}}, {-LaurentPoly::q(-1), {z(j), z(i)}}}});
      out.push_back(
          {"a*", {i, j}, {{1, {zstar(j), zstar(i)}}, {-LaurentPoly::q(-1), {zstar(i), zstar(j)}}}});
    }
  }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j)
        out.push_back({"b", {i, j}, {{1, {zstar(i), z(j)}}, {-LaurentPoly::q(1), {z(j), zstar(i)}}}});
  for (int i = 0; i < n; ++i) {
    RawSum raw{{1, {zstar(i), z(i)}}, {-1, {z(i), zstar(i)}}};
    for (int j = i + 1; j <= n; ++j) raw.push_back({-gap, {z(j), zstar(j)}});
    out.push_back({"c", {i}, std::move(raw)});
  }
  out.push_back({"d", {n}, {{1, {zstar(n), z(n)}}, {-1, {z(n), zstar(n)}}}});
  RawSum sphere{{-1, {}}};
  for (int i = 0; i <= n; ++i) sphere.push_back({1, {z(i), zstar(i)}});
  out.push_back({"e", {}, std::move(sphere)});
  return out;
}

std::vector<RelationCheck> sphere_relation_residuals(int n) {
  std::vector<RelationCheck> out;
  for (const auto& r : sphere_relations(n)) out.push_back({r.family, r.indices, normalize(n, r.raw)});
  return out;
}

namespace {

int sign(int x) { return (x > 0) - (x < 0); }

}  // namespace

NCElement cp_relation_residual(int n, CpFamily family, std::vector<int> idx) {
  const auto need = [&](std::size_t count) {
    if (idx.size() != count) throw std::invalid_argument("wrong number of indices");
    for (int v : idx)
      if (v < 0 || v > n) throw std::out_of_range("index outside 0..n");
  };
  const LaurentPoly gap = LaurentPoly(1) - LaurentPoly::q(2);
  switch (family) {
    case CpFamily::kCommuting: {
      need(4);
      const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
      if (i == l || j == k) throw std::invalid_argument("commuting family needs i != l and j != k");
      return p(n, i, j) * p(n, k, l) -
             LaurentPoly::q(sign(k - i) + sign(j - l)) * (p(n, k, l) * p(n, i, j));
    }
    case CpFamily::kChained: {
      need(3);
      const int i = idx[0], j = idx[1], k = idx[2];
      if (i == k) throw std::invalid_argument("chained family needs i != k");
      NCElement residual = p(n, i, j) * p(n, j, k) -
                           LaurentPoly::q(sign(j - i) + sign(j - k) + 1) * (p(n, j, k) * p(n, i, j));
      for (int l = j + 1; l <= n; ++l) residual += gap * (p(n, i, l) * p(n, l, k));
      return residual;
    }
    case CpFamily::kInverse: {
      need(2);
      const int i = idx[0], j = idx[1];
      if (i == j) throw std::invalid_argument("inverse family needs i != j");
      const LaurentPoly weight = LaurentPoly::q(2 * sign(j - i));
      NCElement residual = p(n, i, j) * p(n, j, i) - weight * (p(n, j, i) * p(n, i, j));
      NCElement bracket(n);
      for (int l = i + 1; l <= n; ++l) bracket += weight * (p(n, j, l) * p(n, l, j));
      for (int l = j + 1; l <= n; ++l) bracket -= p(n, i, l) * p(n, l, i);
      return residual - gap * bracket;
    }
  }
  throw std::invalid_argument("unknown relation family");
}

CpRelationReport verify_cp_relations(int n, std::size_t sample_budget, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("verify_cp_relations: n must be >= 1");
  CpRelationReport report;
  report.n = n;
  std::mt19937_64 rng(seed);

  const auto run_family = [&](CpFamily family, std::vector<std::vector<int>> tuples) {
    if (tuples.size() > sample_budget) {
      std::shuffle(tuples.begin(), tuples.end(), rng);
      tuples.resize(sample_budget);
    }
    const auto slot = static_cast<std::size_t>(family) - 1;
    for (const auto& t : tuples) {
      NCElement residual = cp_relation_residual(n, family, t);
      ++report.checked;
      ++report.checked_per_family[slot];
      if (!residual.is_zero())
        report.violations.push_back(
            {"cp" + std::to_string(static_cast<int>(family)), t, std::move(residual)});
    }
  };

  std::vector<std::vector<int>> commuting, chained, inverse;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i != j) inverse.push_back({i, j});
      for (int k = 0; k <= n; ++k) {
        if (i != k) chained.push_back({i, j, k});
        for (int l = 0; l <= n; ++l)
          if (i != l && j != k) commuting.push_back({i, j, k, l});
      }
    }
  run_family(CpFamily::kCommuting, std::move(commuting));
  run_family(CpFamily::kChained, std::move(chained));
  run_family(CpFamily::kInverse, std::move(inverse));
  return report;
}

}  // namespace qcpn

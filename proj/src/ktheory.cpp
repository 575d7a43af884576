#include "qcpn/ktheory.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcpn {

std::pair<Radicand, LaurentPoly> combine_radicands(const Radicand& a, const Radicand& b) {
  Radicand merged;
  merged.reserve(a.size() + b.size());
  merged.insert(merged.end(), a.begin(), a.end());
  merged.insert(merged.end(), b.begin(), b.end());
  std::sort(merged.begin(), merged.end());
  Radicand out;
  LaurentPoly extracted(1);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i].is_one()) continue;
    if (i + 1 < merged.size() && merged[i] == merged[i + 1]) {
      extracted *= merged[i];
      ++i;
      continue;
    }
    out.push_back(merged[i]);
  }
  return {std::move(out), std::move(extracted)};
}

RootedElement::RootedElement(int n) : n_(n) {}

RootedElement::RootedElement(const NCElement& x) : n_(x.n()) {
  if (!x.is_zero()) parts_.emplace(Radicand{}, x);
}

RootedElement RootedElement::rooted(Radicand under, const NCElement& body) {
  std::sort(under.begin(), under.end());
  auto [radicand, extracted] = combine_radicands(under, {});
  RootedElement out(body.n());
  out.add(radicand, extracted * body);
  return out;
}

void RootedElement::add(const Radicand& r, const NCElement& x) {
  if (x.is_zero()) return;
  auto [it, inserted] = parts_.try_emplace(r, x);
  if (!inserted) {
    it->second += x;
    if (it->second.is_zero()) parts_.erase(it);
  }
}

std::size_t RootedElement::word_count() const {
  std::size_t total = 0;
  for (const auto& [r, x] : parts_) total += x.size();
  return total;
}

bool RootedElement::is_rational() const {
  return parts_.empty() || (parts_.size() == 1 && parts_.begin()->first.empty());
}

NCElement RootedElement::rational() const {
  if (!is_rational()) throw std::domain_error("element carries square roots: " + to_string());
  return parts_.empty() ? NCElement(n_) : parts_.begin()->second;
}

RootedElement& RootedElement::operator+=(const RootedElement& other) {
  if (other.n_ != n_) throw std::invalid_argument("mismatched ambient algebras");
  for (const auto& [r, x] : other.parts_) add(r, x);
  return *this;
}

RootedElement& RootedElement::operator-=(const RootedElement& other) {
  if (other.n_ != n_) throw std::invalid_argument("mismatched ambient algebras");
  for (const auto& [r, x] : other.parts_) add(r, -x);
  return *this;
}

RootedElement RootedElement::operator-() const {
  RootedElement out = *this;
  for (auto& [r, x] : out.parts_) x = -x;
  return out;
}

RootedElement operator*(const RootedElement& a, const RootedElement& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("mismatched ambient algebras");
  RootedElement out(a.n_);
  for (const auto& [ra, xa] : a.parts_) {
    for (const auto& [rb, xb] : b.parts_) {
      auto [r, extracted] = combine_radicands(ra, rb);
      out.add(r, extracted * (xa * xb));
    }
  }
  return out;
}

RootedElement star(const RootedElement& x) {
  RootedElement out(x.n_);
  for (const auto& [r, body] : x.parts_) out.parts_.emplace(r, star(body));
  return out;
}

std::string RootedElement::to_string() const {
  if (parts_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [r, x] : parts_) {
    if (!first) out += " + ";
    first = false;
    if (r.empty()) {
      out += "[" + x.to_string() + "]";
      continue;
    }
    out += "sqrt(";
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += " * ";
      out += "(" + r[i].to_string() + ")";
    }
    out += ") [" + x.to_string() + "]";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void fill_compositions(int remaining, std::size_t slot, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
  if (slot + 1 == current.size()) {
    current[slot] = remaining;
    out.push_back(current);
    return;
  }
  for (int j = 0; j <= remaining; ++j) {
    current[slot] = j;
    fill_compositions(remaining - j, slot + 1, current, out);
  }
}

int pair_sum(const std::vector<int>& j) {
  int sigma = 0;
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t s = r + 1; s < j.size(); ++s) sigma += j[r] * j[s];
  return sigma;
}

int weighted_sum(const std::vector<int>& j) {
  int total = 0;
  for (std::size_t r = 0; r < j.size(); ++r) total += static_cast<int>(r) * j[r];
  return total;
}

// sqrt(M) q^{twice/2} w, with w already normalized.
RootedElement half_power_component(const LaurentPoly& multinomial, int twice, const NCElement& w) {
  Radicand under{multinomial};
  int whole = twice / 2;
  if (twice % 2 != 0) {
    under.push_back(LaurentPoly::q(1));
    whole = (twice - 1) / 2;
  }
  return RootedElement::rooted(std::move(under), LaurentPoly::q(whole) * w);
}

Word descending_star_word(const std::vector<int>& j) {
  // (z_n^{j_n} ... z_0^{j_0})^* = z_0^{*j_0} ... z_n^{*j_n}
  Word w;
  for (std::size_t r = 0; r < j.size(); ++r)
    w.insert(w.end(), static_cast<std::size_t>(j[r]), zstar(static_cast<int>(r)));
  return w;
}

Word ascending_word(const std::vector<int>& j) {
  Word w;
  for (std::size_t r = 0; r < j.size(); ++r)
    w.insert(w.end(), static_cast<std::size_t>(j[r]), z(static_cast<int>(r)));
  return w;
}

void check_degree(int N, int n) {
  if (N < 0) throw std::invalid_argument("degree must be nonnegative");
  if (n < 0) throw std::invalid_argument("negative ambient n");
}

}  // namespace

std::vector<std::vector<int>> compositions(int N, int n) {
  check_degree(N, n);
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(n + 1), 0);
  fill_compositions(N, 0, current, out);
  return out;
}

IsometryVector psi(int N, int n) {
  check_degree(N, n);
  IsometryVector v{N, n, {}};
  for (auto& j : compositions(N, n)) {
    const NCElement w = NCElement::word(n, descending_star_word(j));
    RootedElement value = half_power_component(qmultinomial(j), -pair_sum(j), w);
    v.components.push_back({std::move(j), std::move(value)});
  }
  return v;
}

IsometryVector psi_neg(int N, int n) {
  check_degree(N, n);
  IsometryVector v{-N, n, {}};
  for (auto& j : compositions(N, n)) {
    const NCElement w = NCElement::word(n, ascending_word(j));
    RootedElement value = half_power_component(qmultinomial(j), pair_sum(j) + 2 * weighted_sum(j), w);
    v.components.push_back({std::move(j), std::move(value)});
  }
  return v;
}

IsometryVector isometry(int N, int n) { return N >= 0 ? psi(N, n) : psi_neg(-N, n); }

RootedElement isometry_defect(const IsometryVector& psi) {
  RootedElement total(psi.n);
  for (const auto& c : psi.components) total += star(c.value) * c.value;
  total -= RootedElement(NCElement::one(psi.n));
  return total;
}

ProjectionMatrix::ProjectionMatrix(int N, int n, std::size_t size)
    : N_(N), n_(n), size_(size), entries_(size * size, RootedElement(n)) {}

ProjectionMatrix projection(const IsometryVector& psi) {
  ProjectionMatrix P(psi.N, psi.n, psi.size());
  std::vector<RootedElement> adjoints;
  adjoints.reserve(psi.size());
  for (const auto& c : psi.components) adjoints.push_back(star(c.value));
  for (std::size_t a = 0; a < psi.size(); ++a)
    for (std::size_t b = 0; b < psi.size(); ++b) P.at(a, b) = psi.components[a].value * adjoints[b];
  return P;
}

ProjectionMatrix projection(int N, int n) { return projection(isometry(N, n)); }

namespace {

std::size_t coefficient_terms(const RootedElement& x) {
  std::size_t total = 0;
  for (const auto& [r, body] : x.parts())
    for (const auto& [m, c] : body.terms()) total += c.size();
  return total;
}

// Tallies P^2 - P and P - P^* given the square.
template <class Square>
ProjectionReport tally(const ProjectionMatrix& P, Square&& square_entry) {
  ProjectionReport report;
  report.N = P.N();
  report.n = P.n();
  report.size = P.size();
  for (std::size_t a = 0; a < P.size(); ++a) {
    for (std::size_t c = 0; c < P.size(); ++c) {
      const RootedElement idempotent = square_entry(a, c) - P.at(a, c);
      const RootedElement selfadjoint = P.at(a, c) - star(P.at(c, a));
      report.idempotent_residual_words += idempotent.word_count();
      report.selfadjoint_residual_words += selfadjoint.word_count();
      if (!idempotent.is_zero() || !selfadjoint.is_zero()) ++report.nonzero_entries;
    }
  }
  return report;
}

}  // namespace

double direct_square_cost(const ProjectionMatrix& P) {
  double total = 0;
  for (std::size_t b = 0; b < P.size(); ++b) {
    double in = 0, out = 0;
    for (std::size_t a = 0; a < P.size(); ++a) in += static_cast<double>(coefficient_terms(P.at(a, b)));
    for (std::size_t c = 0; c < P.size(); ++c) out += static_cast<double>(coefficient_terms(P.at(b, c)));
    total += in * out;
  }
  return total;
}

ProjectionReport verify_projection(const ProjectionMatrix& P) {
  ProjectionReport report = tally(P, [&](std::size_t a, std::size_t c) {
    RootedElement square(P.n());
    for (std::size_t b = 0; b < P.size(); ++b) square += P.at(a, b) * P.at(b, c);
    return square;
  });
  report.method = SquareMethod::kDirect;
  return report;
}

ProjectionReport verify_projection(int N, int n, SquareMethod method, double direct_budget) {
  const IsometryVector v = isometry(N, n);
  const ProjectionMatrix P = projection(v);
  if (method == SquareMethod::kAuto)
    method = direct_square_cost(P) <= direct_budget ? SquareMethod::kDirect : SquareMethod::kFactored;
  ProjectionReport report;
  if (method == SquareMethod::kDirect) {
    report = verify_projection(P);
  } else {
    RootedElement gram(n);
    for (const auto& c : v.components) gram += star(c.value) * c.value;
    std::vector<RootedElement> left;
    for (const auto& c : v.components) left.push_back(c.value * gram);
    std::vector<RootedElement> right;
    for (const auto& c : v.components) right.push_back(star(c.value));
    report = tally(P, [&](std::size_t a, std::size_t c) { return left[a] * right[c]; });
    report.method = SquareMethod::kFactored;
  }
  report.isometry_residual_words = isometry_defect(v).word_count();
  return report;
}

std::string to_string(SquareMethod method) {
  switch (method) {
    case SquareMethod::kAuto:
      return "auto";
    case SquareMethod::kDirect:
      return "direct";
    case SquareMethod::kFactored:
      return "factored";
  }
  return "unknown";
}

NCElement qtrace(const ProjectionMatrix& P) {
  // Row a carries the multi-degree j = compositions(|N|, n)[a], weighted by
  // q^{2 sum_r r j_r}; for N = 1 this is q^{2i} on p_ii.
  NCElement total(P.n());
  const auto degrees = compositions(std::abs(P.N()), P.n());
  for (std::size_t a = 0; a < P.size(); ++a)
    total += LaurentPoly::q(2 * weighted_sum(degrees[a])) * P.at(a, a).rational();
  return total;
}

NCElement matrix_trace(const ProjectionMatrix& P) {
  NCElement total(P.n());
  for (std::size_t i = 0; i < P.size(); ++i) total += P.at(i, i).rational();
  return total;
}

RawSum trace_words(int N, int n) {
  RawSum out;
  const bool negative = N < 0;
  for (const auto& j : compositions(negative ? -N : N, n)) {
    const LaurentPoly m = qmultinomial(j);
    if (negative) {
      // psi_a psi_a^* = M q^{sigma + 2 sum r j_r} z_0^{j_0}..z_n^{j_n} (..)^*
      const Word w = ascending_word(j);
      Word full = w;
      const Word tail = adjoint(w);
      full.insert(full.end(), tail.begin(), tail.end());
      out.emplace_back(m * LaurentPoly::q(pair_sum(j) + 2 * weighted_sum(j)), std::move(full));
    } else {
      const Word w = descending_star_word(j);
      Word full = w;
      const Word tail = adjoint(w);
      full.insert(full.end(), tail.begin(), tail.end());
      out.emplace_back(m * LaurentPoly::q(-pair_sum(j)), std::move(full));
    }
  }
  return out;
}

nlohmann::json to_json(const ProjectionMatrix& P) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t a = 0; a < P.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < P.size(); ++b) {
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& [r, x] : P.at(a, b).parts()) {
        nlohmann::json under = nlohmann::json::array();
        for (const auto& f : r) under.push_back(f.to_string());
        parts.push_back({{"sqrt", under}, {"element", x.to_string()}});
      }
      row.push_back(parts);
    }
    entries.push_back(row);
  }
  return {{"schema", "qcpn.projection/1"}, {"N", P.N()}, {"n", P.n()},
          {"size", P.size()}, {"entries", entries}};
}

nlohmann::json to_json(const ProjectionReport& r) {
  return {{"schema", "qcpn.projection-report/1"},
          {"N", r.N},
          {"n", r.n},
          {"size", r.size},
          {"square_method", to_string(r.method)},
          {"isometry_residual_words", r.isometry_residual_words},
          {"idempotent_residual_words", r.idempotent_residual_words},
          {"selfadjoint_residual_words", r.selfadjoint_residual_words},
          {"nonzero_entries", r.nonzero_entries},
          {"ok", r.ok()}};
}

}  // namespace qcpn

#include "qcpn/repspace.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace qcpn {

namespace {

// m_t with m_0 := 0.
int entry(const MultiIndex& m, int t) { return t == 0 ? 0 : m[static_cast<std::size_t>(t - 1)]; }

bool nonnegative(const MultiIndex& m) {
  return std::all_of(m.begin(), m.end(), [](int v) { return v >= 0; });
}

// m + sign * eps^k_i: positions i+1..k change.
MultiIndex shifted(const MultiIndex& m, int i, int k, int sign) {
  MultiIndex out = m;
  for (int t = i + 1; t <= k; ++t) out[static_cast<std::size_t>(t - 1)] += sign;
  return out;
}

// Weight of z_i, i < k, on |m>.
Weight raising_weight(const MultiIndex& m, int i) {
  return Weight{entry(m, i), {entry(m, i + 1) - entry(m, i) + 1}};
}

}  // namespace

bool in_mconstr(const MultiIndex& m, int k) {
  const int n = static_cast<int>(m.size());
  if (k < 0 || k > n) throw std::out_of_range("constraint level outside 0..n");
  if (!nonnegative(m)) return false;
  for (int t = 1; t < k; ++t)
    if (entry(m, t) > entry(m, t + 1)) return false;
  for (int t = k + 1; t < n; ++t)
    if (entry(m, t) <= entry(m, t + 1)) return false;
  return true;
}

bool in_capconstr(const MultiIndex& m, int k) {
  const int n = static_cast<int>(m.size());
  if (k < 1 || k > n) throw std::out_of_range("capconstr level outside 1..n");
  if (!in_mconstr(m, k)) return false;
  return k == n || entry(m, k) > entry(m, k + 1);
}

bool in_constraint(const MultiIndex& m, const ConstraintSet& c) {
  return c.kind == ConstraintKind::kM ? in_mconstr(m, c.k) : in_capconstr(m, c.k);
}

// ---------------------------------------------------------------------------

TruncatedSpace::TruncatedSpace(int n, int cutoff) : n_(n), cutoff_(cutoff), size_(1) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  for (int i = 0; i < n; ++i) {
    if (size_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(cutoff + 1))
      throw std::length_error("truncated space too large");
    size_ *= static_cast<std::size_t>(cutoff + 1);
  }
}

MultiIndex TruncatedSpace::basis(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("basis index outside the space");
  MultiIndex m(static_cast<std::size_t>(n_));
  const auto base = static_cast<std::size_t>(cutoff_ + 1);
  for (int t = n_ - 1; t >= 0; --t) {
    m[static_cast<std::size_t>(t)] = static_cast<int>(index % base);
    index /= base;
  }
  return m;
}

bool TruncatedSpace::contains(const MultiIndex& m) const {
  if (static_cast<int>(m.size()) != n_) return false;
  return std::all_of(m.begin(), m.end(), [&](int v) { return v >= 0 && v <= cutoff_; });
}

std::optional<std::size_t> TruncatedSpace::index(const MultiIndex& m) const {
  if (!contains(m)) return std::nullopt;
  std::size_t out = 0;
  for (int v : m) out = out * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(v);
  return out;
}

bool TruncatedSpace::is_interior(const MultiIndex& m, int depth) const {
  return contains(m) && std::all_of(m.begin(), m.end(), [&](int v) { return v <= cutoff_ - depth; });
}

// ---------------------------------------------------------------------------

Weight& Weight::operator*=(const Weight& other) {
  q_power += other.q_power;
  roots.insert(roots.end(), other.roots.begin(), other.roots.end());
  return *this;
}

std::optional<Step> act(int k, Generator g, const MultiIndex& m) {
  const int n = static_cast<int>(m.size());
  if (k < 0 || k > n) throw std::out_of_range("representation level outside 0..n");
  if (g.index < 0 || g.index > n) throw std::out_of_range("generator index outside 0..n");
  if (g.index > k || !in_mconstr(m, k)) return std::nullopt;
  const int i = g.index;
  if (i == k) return Step{m, Weight{entry(m, k), {}}};  // k = 0 gives the projector
  if (!g.starred) return Step{shifted(m, i, k, +1), raising_weight(m, i)};
  // z_i^* is the transpose of z_i: it lowers by eps^k_i.
  MultiIndex source = shifted(m, i, k, -1);
  if (!in_mconstr(source, k)) return std::nullopt;
  Weight w = raising_weight(source, i);
  return Step{std::move(source), std::move(w)};
}

bool act_in_place(int k, Generator g, MultiIndex& m, int& q_power, int& root) {
  const int n = static_cast<int>(m.size());
  if (k < 0 || k > n) throw std::out_of_range("representation level outside 0..n");
  if (g.index < 0 || g.index > n) throw std::out_of_range("generator index outside 0..n");
  if (g.index > k || !in_mconstr(m, k)) return false;
  const int i = g.index;
  root = 0;
  if (i == k) {
    q_power = entry(m, k);
    return true;
  }
  if (!g.starred) {
    q_power = entry(m, i);
    root = entry(m, i + 1) - entry(m, i) + 1;
    for (int t = i + 1; t <= k; ++t) ++m[static_cast<std::size_t>(t - 1)];
    return true;
  }
  for (int t = i + 1; t <= k; ++t) --m[static_cast<std::size_t>(t - 1)];
  if (!in_mconstr(m, k)) {
    for (int t = i + 1; t <= k; ++t) ++m[static_cast<std::size_t>(t - 1)];
    return false;
  }
  q_power = entry(m, i);
  root = entry(m, i + 1) - entry(m, i) + 1;
  return true;
}

std::optional<Step> act(int k, const Word& w, const MultiIndex& m) {
  Step state{m, {}};
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    auto step = act(k, *it, state.target);
    if (!step) return std::nullopt;
    state.target = std::move(step->target);
    state.weight *= step->weight;
  }
  return state;
}

std::optional<Step> act_p(int k, int i, int j, const MultiIndex& m) {
  const int n = static_cast<int>(m.size());
  if (k < 0 || k > n) throw std::out_of_range("representation level outside 0..n");
  if (i < 0 || j > n) throw std::out_of_range("p index outside 0..n");
  if (i > j) throw std::invalid_argument("act_p needs i <= j; use the adjoint of p_ji");
  if (j > k || !in_mconstr(m, k)) return std::nullopt;
  Step step;
  if (j < k) {
    step = Step{shifted(m, i, j, -1),
                Weight{entry(m, i) + entry(m, j),
                       {entry(m, i + 1) - entry(m, i) + (i == j ? 1 : 0), entry(m, j + 1) - entry(m, j) + 1}}};
  } else if (i < k) {
    step = Step{shifted(m, i, k, -1), Weight{entry(m, i) + entry(m, k), {entry(m, i + 1) - entry(m, i)}}};
  } else {
    step = Step{m, Weight{2 * entry(m, k), {}}};
  }
  for (int r : step.weight.roots) {
    if (r < 0) throw std::logic_error("negative radicand exponent in p action");
    if (r == 0) return std::nullopt;
  }
  if (!nonnegative(step.target)) throw std::logic_error("p action leaves N^n");
  return step;
}

// ---------------------------------------------------------------------------

FloatField::FloatField(double q) : q_(q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q must lie in (0, 1)");
}

double FloatField::eval(const Weight& w) const {
  double value = std::pow(q_, w.q_power);
  for (int j : w.roots) value *= std::sqrt(1.0 - std::pow(q_, 2 * j));
  return value;
}

ExactField::ExactField(const Rational& q) : q_(q) {
  q_.canonicalize();
  if (!(q_ > 0 && q_ < 1)) throw std::domain_error("q must lie in (0, 1)");
}

namespace {

Rational rational_power(const Rational& q, int e) {
  Rational out = 1;
  mpz_pow_ui(out.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(std::abs(e)));
  mpz_pow_ui(out.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(std::abs(e)));
  if (e < 0) out = 1 / out;
  out.canonicalize();
  return out;
}

}  // namespace

SurdNumber ExactField::eval(const Weight& w) const {
  static std::mutex mu;
  static std::map<std::pair<Rational, int>, SurdNumber> roots;
  SurdNumber value(rational_power(q_, w.q_power));
  for (int j : w.roots) {
    if (j == 0) return SurdNumber();
    std::lock_guard lock(mu);
    auto key = std::make_pair(q_, j);
    auto it = roots.find(key);
    if (it == roots.end())
      it = roots.emplace(key, SurdNumber::sqrt(1 - rational_power(q_, 2 * j))).first;
    value = value * it->second;
  }
  return value;
}

// ---------------------------------------------------------------------------

namespace {

template <class Scalar, class Format>
nlohmann::json operator_json(const SparseOperator<Scalar>& a, Format&& format) {
  const auto& space = a.space();
  nlohmann::json basis = nlohmann::json::array();
  for (std::size_t i = 0; i < space.size(); ++i) basis.push_back(space.basis(i));
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t col = 0; col < a.dimension(); ++col)
    for (const auto& [row, v] : a.column(col)) entries.push_back({row, col, format(v)});
  return {{"schema", "qcpn.operator/1"}, {"n", space.n()},       {"cutoff", space.cutoff()},
          {"dimension", space.size()},   {"basis", basis},       {"entries", entries}};
}

}  // namespace

nlohmann::json to_json(const SparseOperator<double>& a) {
  return operator_json(a, [](double v) { return nlohmann::json(v); });
}

nlohmann::json to_json(const SparseOperator<SurdNumber>& a) {
  return operator_json(a, [](const SurdNumber& v) { return nlohmann::json(v.to_string()); });
}

std::string to_text(const SparseOperator<double>& a) {
  std::ostringstream out;
  out.precision(17);
  const auto& space = a.space();
  out << "# n " << space.n() << " cutoff " << space.cutoff() << " dimension " << space.size() << "\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << "# basis " << i;
    for (int v : space.basis(i)) out << ' ' << v;
    out << "\n";
  }
  for (std::size_t col = 0; col < a.dimension(); ++col)
    for (const auto& [row, v] : a.column(col)) out << row << ' ' << col << ' ' << v << "\n";
  return out.str();
}

}  // namespace qcpn

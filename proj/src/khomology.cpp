#include "qcpn/khomology.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <map>

#include <gmpxx.h>

#include "qcpn/ktheory.hpp"
#include "qcpn/parallel.hpp"

namespace qcpn {

namespace {

void check_q(double q0) {
  if (!(q0 > 0.0 && q0 < 1.0)) throw std::domain_error("q must lie in (0, 1)");
}

void check_level(int n, int k) {
  if (n < 0) throw std::invalid_argument("negative ambient n");
  if (k < 0 || k > n) throw std::out_of_range("module level outside 0..n");
}

struct CompiledWord {
  double coefficient;
  Word letters;  // in application order
};

std::vector<CompiledWord> compile(const RawSum& words, double q0) {
  std::vector<CompiledWord> out;
  for (const auto& [c, w] : words) {
    const double value = c.eval(q0);
    if (value == 0.0) continue;
    out.push_back({value, Word(w.rbegin(), w.rend())});
  }
  return out;
}

// q^e and sqrt(1 - q^{2r}) with tables for small arguments.
class Weights {
 public:
  Weights(double q0, int size) : q_(q0) {
    power_.resize(static_cast<std::size_t>(size));
    root_.resize(static_cast<std::size_t>(size));
    for (int e = 0; e < size; ++e) {
      power_[static_cast<std::size_t>(e)] = std::pow(q0, e);
      root_[static_cast<std::size_t>(e)] = std::sqrt(1.0 - std::pow(q0, 2 * e));
    }
  }

  double power(int e) const {
    return e < static_cast<int>(power_.size()) ? power_[static_cast<std::size_t>(e)] : std::pow(q_, e);
  }
  double root(int r) const {
    if (r == 0) return 1.0;
    return r < static_cast<int>(root_.size()) ? root_[static_cast<std::size_t>(r)]
                                              : std::sqrt(1.0 - std::pow(q_, 2 * r));
  }

 private:
  double q_;
  std::vector<double> power_;
  std::vector<double> root_;
};

// Follows one word from m; returns the weight and leaves the target in `scratch`.
bool follow(int level, const CompiledWord& w, const MultiIndex& m, MultiIndex& scratch, const Weights& weights,
            double& value) {
  scratch = m;
  value = w.coefficient;
  int power = 0, root = 0;
  for (const Generator g : w.letters) {
    if (!act_in_place(level, g, scratch, power, root)) return false;
    value *= weights.power(power) * weights.root(root);
  }
  return true;
}

std::size_t max_word_length(const RawSum& words) {
  std::size_t out = 0;
  for (const auto& [c, w] : words) out = std::max(out, w.size());
  return out;
}

// Calls visit(m) for every m in the box of N^k with first entry `first`
// (every m when k = 0), in lexicographic order.
template <class Visit>
void for_each_in_slice(int k, int cutoff, int first, Visit&& visit) {
  MultiIndex m(static_cast<std::size_t>(k), 0);
  if (k == 0) {
    visit(m);
    return;
  }
  m[0] = first;
  while (true) {
    visit(m);
    int t = k - 1;
    while (t >= 1 && m[static_cast<std::size_t>(t)] == cutoff) m[static_cast<std::size_t>(t--)] = 0;
    if (t < 1) return;
    ++m[static_cast<std::size_t>(t)];
  }
}

int max_entry(const MultiIndex& m) {
  int out = 0;
  for (int v : m) out = std::max(out, v);
  return out;
}

double binomial_real(double a, int b) {
  if (b < 0 || a < b) return 0.0;
  double out = 1;
  for (int t = 1; t <= b; ++t) out = out * (a - b + t) / t;
  return out;
}

// sum_{t>c} f(t) q^t for f(t) = binom(t+j-1, j-1) binom(t, k-j). Terms are
// summed until the term ratio, which is nonincreasing once t >= k - j, drops
// below 1; the rest is bounded by a geometric series.
double geometric_tail(int k, int j, double q0, int cutoff) {
  auto term = [&](int t) { return binomial_real(t + j - 1, j - 1) * binomial_real(t, k - j) * std::pow(q0, t); };
  double total = 0;
  for (int t = cutoff + 1;; ++t) {
    const double now = term(t);
    const double next = term(t + 1);
    if (t >= k - j && now > 0 && next < now) {
      const double ratio = next / now;
      return total + now / (1.0 - ratio);
    }
    total += now;
    if (t > cutoff + 100000) throw std::runtime_error("tail bound did not settle");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

FredholmModule::FredholmModule(int n, int k, int cutoff)
    : n_(n), k_(k), space_(std::make_shared<const TruncatedSpace>(k, cutoff)) {
  check_level(n, k);
}

NCElement FredholmModule::pullback(const NCElement& a) const {
  if (a.n() != n_) throw std::invalid_argument("element of a different algebra");
  return restrict_to_level(a, k_);
}

RawSum FredholmModule::pullback(const RawSum& a) const { return restrict_to_level(a, k_); }

SparseOperator<double> FredholmModule::pi_plus(const NCElement& a, double q0) const {
  return represent_pm(FloatField(q0), Parity::kEven, pullback(a), space_);
}

SparseOperator<double> FredholmModule::pi_minus(const NCElement& a, double q0) const {
  return represent_pm(FloatField(q0), Parity::kOdd, pullback(a), space_);
}

BlockOperator FredholmModule::represent(const NCElement& a, double q0) const {
  return BlockOperator::diagonal(pi_plus(a, q0), pi_minus(a, q0));
}

FredholmModule pullback_module(int k, int n, int cutoff) { return FredholmModule(n, k, cutoff); }

// ---------------------------------------------------------------------------

TraceLayers trace_layers(const RawSum& words, int k, double q0, int cutoff) {
  check_q(q0);
  if (k < 0) throw std::out_of_range("negative module level");
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  const auto compiled = compile(words, q0);
  const Weights weights(q0, cutoff + 2 * static_cast<int>(max_word_length(words)) + 2);
  const std::size_t chunks = k == 0 ? 1 : static_cast<std::size_t>(cutoff + 1);

  struct Partial {
    std::vector<long double> layers;
    long double abs_sum = 0;
    std::size_t terms = 0;
  };
  std::vector<Partial> partial(chunks);
  parallel_for(chunks, [&](std::size_t chunk) {
    Partial& out = partial[chunk];
    out.layers.assign(static_cast<std::size_t>(cutoff + 1), 0.0L);
    MultiIndex scratch;
    for_each_in_slice(k, cutoff, static_cast<int>(chunk), [&](const MultiIndex& m) {
      long double local = 0;
      for (int level = 0; level <= k; ++level) {
        if (!in_mconstr(m, level)) continue;
        const double sign = level % 2 == 0 ? 1.0 : -1.0;
        for (const auto& w : compiled) {
          double value = 0;
          if (!follow(level, w, m, scratch, weights, value) || scratch != m) continue;
          local += sign * value;
          out.abs_sum += std::fabs(value);
          ++out.terms;
        }
      }
      out.layers[static_cast<std::size_t>(max_entry(m))] += local;
    });
  });

  std::vector<long double> merged(static_cast<std::size_t>(cutoff + 1), 0.0L);
  TraceLayers result;
  long double abs_sum = 0;
  for (const auto& p : partial) {
    for (std::size_t t = 0; t < merged.size(); ++t) merged[t] += p.layers[t];
    abs_sum += p.abs_sum;
    result.terms += p.terms;
  }
  result.trace.assign(merged.begin(), merged.end());
  result.abs_sum = static_cast<double>(abs_sum);
  return result;
}

double tail_bound(const RawSum& words, int k, double q0, int cutoff) {
  check_q(q0);
  if (k == 0) return 0.0;
  double largest = 0;
  std::size_t count = 0;
  for (const auto& [c, w] : words) {
    const double value = std::fabs(c.eval(q0));
    if (value == 0.0) continue;
    largest = std::max(largest, value);
    ++count;
  }
  if (count == 0) return 0.0;
  double total = 0;
  for (int j = 1; j <= k; ++j) total += geometric_tail(k, j, q0, cutoff);
  return static_cast<double>(count) * largest * total;
}

int certified_cutoff(const RawSum& words, int k, double q0, double target) {
  constexpr int kStart = 8;
  constexpr int kLimit = 1 << 14;
  if (tail_bound(words, k, q0, 0) < target) return 0;
  int hi = kStart;
  while (tail_bound(words, k, q0, hi) >= target) {
    hi *= 2;
    if (hi > kLimit) throw UncertifiedPairing("no cutoff below the search limit certifies the tail");
  }
  int lo = hi / 2;  // tail(lo) >= target unless hi = kStart
  if (hi == kStart) lo = 0;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (tail_bound(words, k, q0, mid) < target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TraceResult trace_difference(int n, const RawSum& a, int k, double q0, int cutoff) {
  check_level(n, k);
  const RawSum words = restrict_to_level(a, k);
  const TraceLayers layers = trace_layers(words, k, q0, cutoff);
  TraceResult out;
  long double total = 0;
  for (double v : layers.trace) total += v;
  out.value = static_cast<double>(total);
  out.tail = tail_bound(words, k, q0, cutoff);
  // Each term is a product of at most 2L + 1 rounded factors; the sum runs in
  // extended precision.
  const double per_term = (2.0 * static_cast<double>(max_word_length(words)) + 4.0) * DBL_EPSILON;
  const double summation = static_cast<double>(layers.terms + 1) * LDBL_EPSILON;
  out.rounding = (per_term + summation) * layers.abs_sum;
  out.cutoff = cutoff;
  return out;
}

TraceResult trace_difference(const NCElement& a, int k, double q0, int cutoff) {
  return trace_difference(a.n(), to_raw(a), k, q0, cutoff);
}

// ---------------------------------------------------------------------------

PairingResult pairing(int n, int k, int N, double q0, std::optional<int> cutoff) {
  check_level(n, k);
  check_q(q0);
  if (N < 0) throw std::invalid_argument("pairing degree must be nonnegative (pairs with P_{-N})");
  const RawSum trace = trace_words(-N, n);
  const RawSum words = restrict_to_level(trace, k);
  const int c = cutoff ? *cutoff : certified_cutoff(words, k, q0);
  const TraceResult t = trace_difference(n, trace, k, q0, c);
  PairingResult out;
  out.n = n;
  out.k = k;
  out.N = N;
  out.q = q0;
  out.cutoff = c;
  out.value = t.value;
  out.tail = t.tail;
  out.rounding = t.rounding;
  out.rounded = std::lround(t.value);
  out.certified = std::fabs(t.value - static_cast<double>(out.rounded)) + t.tail + t.rounding < 0.5;
  return out;
}

IntMatrix pairing_inverse(int n) {
  IntMatrix out(static_cast<std::size_t>(n + 1), std::vector<long>(static_cast<std::size_t>(n + 1), 0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) out[i][j] = ((i + j) % 2 == 0 ? 1 : -1) * binomial(j, i);
  return out;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t rows = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  IntMatrix out(rows, std::vector<long>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != inner) throw std::invalid_argument("matrix shapes do not match");
    for (std::size_t j = 0; j < cols; ++j) {
      mpz_class total = 0;
      for (std::size_t t = 0; t < inner; ++t) total += mpz_class(a[i][t]) * b[t][j];
      if (!total.fits_slong_p()) throw std::overflow_error("integer matrix product overflows");
      out[i][j] = total.get_si();
    }
  }
  return out;
}

PairingMatrix pairing_matrix(int n, double q0, std::optional<int> cutoff) {
  check_level(n, 0);
  PairingMatrix out;
  out.n = n;
  out.q = q0;
  const auto size = static_cast<std::size_t>(n + 1);
  out.M.assign(size, std::vector<long>(size, 0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      PairingResult r = pairing(n, i, j, q0, cutoff);
      if (!r.certified)
        throw UncertifiedPairing("pairing <mu_" + std::to_string(i) + ", P_-" + std::to_string(j) +
                                 "> is not certified");
      out.M[i][j] = r.rounded;
      out.entries.push_back(r);
    }
  out.inverse = pairing_inverse(n);
  out.product = multiply(out.M, out.inverse);
  out.unimodular = true;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      if (out.product[i][j] != (i == j ? 1 : 0)) out.unimodular = false;
  return out;
}

long binomial(int a, int b) {
  if (b < 0 || a < 0 || b > a) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  if (!out.fits_slong_p()) throw std::overflow_error("binomial coefficient overflows");
  return out.get_si();
}

long alternating_sum_identity(int i, int j) {
  if (j < 0 || j > i) throw std::invalid_argument("alternating sum needs 0 <= j <= i");
  mpz_class total = 0;
  for (int k = j; k <= i; ++k) {
    mpz_class a, b;
    mpz_bin_uiui(a.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(k));
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
    total += ((j + k) % 2 == 0 ? 1 : -1) * a * b;
  }
  return total.get_si();
}

long capconstr_count(int n, int k, int t) {
  if (k < 1 || k > n) throw std::out_of_range("capconstr level outside 1..n");
  if (t < 0) return 0;
  long count = 0;
  const TruncatedSpace box(n, t);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const MultiIndex m = box.basis(i);
    if (m[static_cast<std::size_t>(k - 1)] == t && in_capconstr(m, k)) ++count;
  }
  return count;
}

long capconstr_count_formula(int n, int k, int t) { return binomial(t + k - 1, k - 1) * binomial(t, n - k); }

long q_limit_pairing(int N, int k) {
  if (N < 0 || k < 0) throw std::invalid_argument("negative degree or level");
  if (k == 0) return 1;
  if (N == 0) return 0;
  long count = 0;
  const TruncatedSpace box(k, N - 1);
  for (std::size_t i = 0; i < box.size(); ++i)
    if (in_capconstr(box.basis(i), 1)) ++count;
  return count;
}

// ---------------------------------------------------------------------------

DecayProfile decay_profile(const NCElement& a, int k, double q0, int cutoff) {
  check_level(a.n(), k);
  check_q(q0);
  // Normalizing at level k makes cancellations exact before any rounding.
  const RawSum words = to_raw(restrict_to_level(a, k));
  const auto compiled = compile(words, q0);
  const Weights weights(q0, cutoff + 2 * static_cast<int>(max_word_length(words)) + 2);
  DecayProfile out;
  out.trace.assign(static_cast<std::size_t>(cutoff + 1), 0.0);
  out.entries.assign(static_cast<std::size_t>(cutoff + 1), 0.0);
  const std::size_t chunks = k == 0 ? 1 : static_cast<std::size_t>(cutoff + 1);
  std::vector<DecayProfile> partial(chunks);
  parallel_for(chunks, [&](std::size_t chunk) {
    DecayProfile& p = partial[chunk];
    p.trace.assign(out.trace.size(), 0.0);
    p.entries.assign(out.entries.size(), 0.0);
    MultiIndex scratch;
    for_each_in_slice(k, cutoff, static_cast<int>(chunk), [&](const MultiIndex& m) {
      std::map<MultiIndex, double> column;
      for (int level = 0; level <= k; ++level) {
        if (!in_mconstr(m, level)) continue;
        const double sign = level % 2 == 0 ? 1.0 : -1.0;
        for (const auto& w : compiled) {
          double value = 0;
          if (follow(level, w, m, scratch, weights, value)) column[scratch] += sign * value;
        }
      }
      const auto layer = static_cast<std::size_t>(max_entry(m));
      for (const auto& [target, value] : column) {
        p.entries[layer] += std::fabs(value);
        if (target == m) p.trace[layer] += value;
      }
    });
  });
  for (const auto& p : partial)
    for (std::size_t t = 0; t < out.trace.size(); ++t) {
      out.trace[t] += p.trace[t];
      out.entries[t] += p.entries[t];
    }
  return out;
}

double doubling_ratio(const std::vector<double>& layers, int c) {
  if (c < 1 || layers.size() < static_cast<std::size_t>(4 * c + 1))
    throw std::invalid_argument("doubling ratio needs layers up to 4c");
  auto range = [&](int from, int to) {
    long double total = 0;
    for (int t = from; t <= to; ++t) total += layers[static_cast<std::size_t>(t)];
    return std::fabs(static_cast<double>(total));
  };
  const double first = range(c + 1, 2 * c);
  const double second = range(2 * c + 1, 4 * c);
  if (first == 0.0 || second == 0.0) return std::numeric_limits<double>::quiet_NaN();
  // For layers r^t the quotient is x (1 + x) with x = r^c.
  const double quotient = second / first;
  const double x = (std::sqrt(1.0 + 4.0 * quotient) - 1.0) / 2.0;
  return std::pow(x, 1.0 / c);
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const PairingResult& r) {
  return {{"schema", "qcpn.pairing/1"}, {"n", r.n},         {"k", r.k},
          {"N", r.N},                   {"q", r.q},         {"cutoff", r.cutoff},
          {"value", r.value},           {"tail", r.tail},   {"rounding", r.rounding},
          {"rounded", r.rounded},       {"certified", r.certified}};
}

nlohmann::json to_json(const PairingMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) entries.push_back(to_json(e));
  return {{"schema", "qcpn.pairing-matrix/1"},
          {"n", m.n},
          {"q", m.q},
          {"M", m.M},
          {"inverse", m.inverse},
          {"product", m.product},
          {"unimodular", m.unimodular},
          {"entries", entries}};
}

}  // namespace qcpn

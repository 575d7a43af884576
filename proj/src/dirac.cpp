#include "qcpn/dirac.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <gmpxx.h>

#include "qcpn/khomology.hpp"

namespace qcpn {

namespace {

double exponent(int n, double d) {
  if (!(d > 0)) throw std::invalid_argument("summability parameter d must be positive");
  return static_cast<double>(n) / d;
}

// y = X x with X stored by columns.
void multiply(const SparseOperator<double>& X, const std::vector<double>& x, std::vector<double>& y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t col = 0; col < X.dimension(); ++col) {
    const double v = x[col];
    if (v == 0.0) continue;
    for (const auto& [r, a] : X.column(col)) y[r] += a * v;
  }
}

// y = X^T x.
void multiply_transpose(const SparseOperator<double>& X, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t col = 0; col < X.dimension(); ++col) {
    double total = 0;
    for (const auto& [r, a] : X.column(col)) total += a * x[r];
    y[col] = total;
  }
}

double norm2(const std::vector<double>& v) {
  double total = 0;
  for (double x : v) total += x * x;
  return std::sqrt(total);
}

}  // namespace

DiracOperator::DiracOperator(int n, double d, std::shared_ptr<const TruncatedSpace> space)
    : n_(n), d_(d), space_(std::move(space)) {
  if (space_->n() != n) throw std::invalid_argument("space dimension differs from n");
  const double power = exponent(n, d);
  abs_.resize(space_->size());
  for (std::size_t i = 0; i < space_->size(); ++i) {
    long total = 0;
    for (int v : space_->basis(i)) total += v;
    abs_[i] = total == 0 ? 0.0 : std::pow(static_cast<double>(total), power);
  }
}

SparseOperator<double> DiracOperator::abs() const {
  SparseOperator<double> out(space_);
  for (std::size_t i = 0; i < abs_.size(); ++i) out.add(i, i, abs_[i]);
  return out;
}

BlockOperator DiracOperator::D() const {
  SparseOperator<double> zero(space_);
  const auto a = abs();
  return {zero, a, a, zero};
}

DiracOperator build_dirac(int n, double d, std::shared_ptr<const TruncatedSpace> space) {
  return DiracOperator(n, d, std::move(space));
}

DiracChecks check_dirac(const DiracOperator& D) {
  DiracChecks out;
  const auto d = D.D();
  const auto f = D.F();
  const auto g = D.grading();
  const auto one = BlockOperator::identity(D.space());
  out.self_adjoint = d.adjoint() == d;
  out.F_involution = f * f == one;
  out.grading_anticommutes = (g * d + d * g).max_abs() == 0.0 && (g * f + f * g).max_abs() == 0.0;
  const auto abs = D.abs();
  SparseOperator<double> zero(D.space());
  out.D_is_abs_times_F = BlockOperator(abs, zero, zero, abs) * f == d;
  return out;
}

long spectrum_multiplicity(int n, int lambda, int cutoff) {
  if (n < 1) throw std::invalid_argument("spectrum needs n >= 1");
  if (lambda < 0) return 0;
  if (lambda > cutoff) throw std::invalid_argument("lambda exceeds the cutoff; enumeration would be incomplete");
  const TruncatedSpace box(n, cutoff);
  long count = 0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    long total = 0;
    for (int v : box.basis(i)) total += v;
    if (total == lambda) ++count;
  }
  return count;
}

std::vector<long> multiplicities(int n, int max_lambda) {
  if (n < 1) throw std::invalid_argument("spectrum needs n >= 1");
  // After t rounds ways[l] counts (m_1, ..., m_t) with sum l; each new
  // coordinate is a prefix sum.
  std::vector<long> ways(static_cast<std::size_t>(max_lambda + 1), 0);
  ways[0] = 1;
  for (int t = 0; t < n; ++t) {
    std::vector<long> next(ways.size(), 0);
    long running = 0;
    for (std::size_t l = 0; l < ways.size(); ++l) {
      running += ways[l];
      next[l] = running;
    }
    ways = std::move(next);
  }
  return ways;
}

long stated_multiplicity(int n, int lambda) { return binomial(lambda + n, n - 1); }

int polynomial_degree(const std::vector<long>& values) {
  std::vector<mpz_class> diff(values.begin(), values.end());
  for (int order = 0; !diff.empty(); ++order) {
    bool all_zero = true;
    for (const auto& v : diff)
      if (v != 0) all_zero = false;
    if (all_zero) return order - 1;
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
  }
  throw std::invalid_argument("too few values to determine the degree");
}

SparseOperator<double> abs_commutator(const DiracOperator& D, const SparseOperator<double>& X) {
  SparseOperator<double> out(X.space_ptr());
  const auto& a = D.abs_values();
  for (std::size_t col = 0; col < X.dimension(); ++col)
    for (const auto& [r, v] : X.column(col)) out.add(r, col, (a[r] - a[col]) * v);
  return out;
}

NormEstimate operator_norm(const SparseOperator<double>& X, const PowerIterationOptions& options) {
  NormEstimate out;
  const std::size_t size = X.dimension();
  if (X.nonzeros() == 0) {
    out.converged = true;
    return out;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.5, 1.5);
  std::vector<double> x(size), y(size), z(size);
  for (auto& v : x) v = uniform(rng);
  double scale = norm2(x);
  for (auto& v : x) v /= scale;
  double previous = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    multiply(X, x, y);
    multiply_transpose(X, y, z);
    const double lambda = norm2(z);  // approximates sigma_max^2
    out.iterations = it;
    if (lambda == 0.0) {
      out.norm = 0;
      out.converged = true;
      return out;
    }
    for (std::size_t i = 0; i < size; ++i) x[i] = z[i] / lambda;
    out.norm = std::sqrt(lambda);
    if (it > 1 && std::fabs(lambda - previous) <= options.tolerance * lambda) {
      out.converged = true;
      return out;
    }
    previous = lambda;
  }
  return out;
}

std::vector<CommutatorNorm> commutator_norm(int n, int i, int j, double q0, const std::vector<int>& cutoffs, double d,
                                            const PowerIterationOptions& options) {
  if (n < 1) throw std::invalid_argument("commutators need n >= 1");
  if (d == 0) d = n;
  const NCElement a = p(n, i, j);
  std::vector<CommutatorNorm> out;
  for (int c : cutoffs) {
    if (c < 1) throw std::invalid_argument("cutoff must be at least 1");
    const FredholmModule mu(n, n, c);
    const DiracOperator D(n, d, mu.space());
    const auto plus = mu.pi_plus(a, q0);
    const auto minus = mu.pi_minus(a, q0);
    const auto abs = D.abs();
    const auto upper = abs * minus - plus * abs;
    const auto lower = abs * plus - minus * abs;
    NormEstimate first = operator_norm(upper, options);
    NormEstimate second = operator_norm(lower, options);
    NormEstimate best = first.norm >= second.norm ? first : second;
    best.converged = first.converged && second.converged;
    out.push_back({c, best});
  }
  return out;
}

double summability_trace(int n, double d, double s, int cutoff) {
  if (!(s > 0)) throw std::invalid_argument("s must be positive");
  const double power = exponent(n, d) * s;
  const auto mult = multiplicities(n, cutoff);
  long double total = 0;
  for (int lambda = 1; lambda <= cutoff; ++lambda)
    total += static_cast<long double>(mult[static_cast<std::size_t>(lambda)]) *
             std::pow(static_cast<long double>(lambda), -static_cast<long double>(power));
  return static_cast<double>(total);
}

SummabilityReport summability_diagnostic(int n, double d, double s, int cutoff, double tolerance) {
  SummabilityReport out;
  out.n = n;
  out.d = d;
  out.s = s;
  out.cutoff = cutoff;
  const double s1 = summability_trace(n, d, s, cutoff);
  const double s2 = summability_trace(n, d, s, 2 * cutoff);
  const double s4 = summability_trace(n, d, s, 4 * cutoff);
  out.partial_sum = s4;
  out.first_step = s2 - s1;
  out.second_step = s4 - s2;
  if (out.second_step < tolerance) {
    out.verdict = SummabilityVerdict::kConverging;
  } else if (out.second_step >= out.first_step) {
    out.verdict = SummabilityVerdict::kDiverging;
  } else {
    out.verdict = SummabilityVerdict::kUndecided;
  }
  return out;
}

std::string to_string(SummabilityVerdict v) {
  switch (v) {
    case SummabilityVerdict::kConverging:
      return "converging";
    case SummabilityVerdict::kDiverging:
      return "diverging";
    case SummabilityVerdict::kUndecided:
      break;
  }
  return "undecided";
}

std::string spectrum_csv(int n, int max_lambda) {
  std::ostringstream out;
  out << "lambda,multiplicity\n";
  const auto mult = multiplicities(n, max_lambda);
  for (int l = 0; l <= max_lambda; ++l) out << l << ',' << mult[static_cast<std::size_t>(l)] << '\n';
  return out.str();
}

nlohmann::json to_json(const std::vector<CommutatorNorm>& norms) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : norms)
    out.push_back({{"cutoff", c.cutoff},
                   {"norm", c.estimate.norm},
                   {"iterations", c.estimate.iterations},
                   {"converged", c.estimate.converged}});
  return out;
}

nlohmann::json to_json(const SummabilityReport& r) {
  return {{"schema", "qcpn.summability/1"}, {"n", r.n},
          {"d", r.d},
          {"s", r.s},
          {"cutoff", r.cutoff},
          {"partial_sum", r.partial_sum},
          {"first_step", r.first_step},
          {"second_step", r.second_step},
          {"verdict", to_string(r.verdict)}};
}

}  // namespace qcpn

#include "qcpn/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcpn/dirac.hpp"
#include "qcpn/khomology.hpp"
#include "qcpn/ktheory.hpp"
#include "qcpn/ncalgebra.hpp"
#include "qcpn/repspace.hpp"

namespace qcpn::cli {

namespace {

using nlohmann::json;

constexpr double kFloatTolerance = 1e-12;   // represented residuals in float mode
constexpr double kStabilityTolerance = 0.01;  // commutator norms across doubling

struct Report {
  json body;
  std::string csv;
  bool ok = true;
};

// "a.b: value" lines in key order.
void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

std::string csv_number(double x) { return json(x).dump(); }

int require_cutoff(const RunConfig& c, int fallback) {
  const int cutoff = c.cutoff.value_or(fallback);
  if (cutoff < 1) throw ConfigError("cutoff must be at least 1");
  return cutoff;
}

double dirac_d(const RunConfig& c) {
  const double d = c.d.value_or(static_cast<double>(c.n));
  if (!(d > 0) || !std::isfinite(d)) throw ConfigError("d must be positive");
  return d;
}

void require_n(const RunConfig& c, int least) {
  if (c.n < least) throw ConfigError("n must be at least " + std::to_string(least));
}

Report run_pair(const RunConfig& c, const QValue& q) {
  require_n(c, 0);
  if (c.k < 0 || c.k > c.n) throw ConfigError("k must satisfy 0 <= k <= n");
  if (c.N < 0) throw ConfigError("N must be non-negative");
  std::optional<int> cutoff;
  if (c.cutoff) cutoff = require_cutoff(c, 1);
  const auto r = pairing(c.n, c.k, c.N, q.value, cutoff);
  Report out;
  out.body = to_json(r);
  out.ok = r.certified;
  out.csv = "n,k,N,q,cutoff,value,tail,rounding,rounded,certified\n" + std::to_string(r.n) + ',' +
            std::to_string(r.k) + ',' + std::to_string(r.N) + ',' + csv_number(r.q) + ',' +
            std::to_string(r.cutoff) + ',' + csv_number(r.value) + ',' + csv_number(r.tail) + ',' +
            csv_number(r.rounding) + ',' + std::to_string(r.rounded) + ',' + (r.certified ? "true" : "false") +
            '\n';
  return out;
}

template <class Field>
json represented_summary(const Field& field, int n, int cutoff, double tolerance, bool& ok) {
  const auto space = std::make_shared<const TruncatedSpace>(n, cutoff);
  std::size_t nonzero = 0;
  std::size_t failing = 0;
  double worst = 0;
  const auto residuals = represented_relation_residuals(field, space);
  for (const auto& r : residuals) {
    nonzero += r.interior_nonzeros;
    worst = std::max(worst, r.max_abs);
    if (r.max_abs > tolerance) ++failing;
  }
  ok = failing == 0;
  return {{"checked", residuals.size()},
          {"nonzero_entries", nonzero},
          {"failing", failing},
          {"max_abs", worst},
          {"tolerance", tolerance}};
}

Report run_verify_relations(const RunConfig& c, const QValue& q) {
  require_n(c, 0);
  const int cutoff = require_cutoff(c, 6);
  Report out;

  std::size_t symbolic_nonzero = 0;
  const auto sphere = sphere_relation_residuals(c.n);
  for (const auto& r : sphere)
    if (!r.residual.is_zero()) ++symbolic_nonzero;

  json cp = nullptr;
  std::size_t cp_violations = 0;
  if (c.n >= 1) {
    const auto report = verify_cp_relations(c.n, 1u << 20, c.seed);
    cp_violations = report.violations.size();
    cp = {{"checked", report.checked}, {"nonzero_residuals", cp_violations}};
  }

  bool represented_ok = true;
  json represented;
  if (q.exact) {
    represented = represented_summary(ExactField(*q.exact), c.n, cutoff, 0.0, represented_ok);
    represented["backend"] = "exact";
  } else {
    represented = represented_summary(FloatField(q.value), c.n, cutoff, kFloatTolerance, represented_ok);
    represented["backend"] = "float";
  }
  represented["cutoff"] = cutoff;

  out.ok = symbolic_nonzero == 0 && cp_violations == 0 && represented_ok;
  out.body = {{"schema", "qcpn.relations/1"},
              {"n", c.n},
              {"q", q.value},
              {"sphere", {{"checked", sphere.size()}, {"nonzero_residuals", symbolic_nonzero}}},
              {"cp", cp},
              {"represented", represented},
              {"ok", out.ok}};
  std::ostringstream csv;
  csv << "suite,checked,nonzero\n";
  csv << "sphere," << sphere.size() << ',' << symbolic_nonzero << '\n';
  if (c.n >= 1) csv << "cp," << cp["checked"].get<std::size_t>() << ',' << cp_violations << '\n';
  csv << "represented," << represented["checked"].get<std::size_t>() << ','
      << represented["failing"].get<std::size_t>() << '\n';
  out.csv = csv.str();
  return out;
}

Report run_verify_projection(const RunConfig& c) {
  require_n(c, 0);
  const auto report = verify_projection(c.N, c.n);
  Report out;
  out.ok = report.ok();
  out.body = to_json(report);
  if (std::abs(c.N) == 1) {
    const auto trace = qtrace(projection(c.N, c.n));
    out.body["qtrace"] = trace.to_string();
  }
  std::ostringstream csv;
  csv << "N,n,size,isometry_residual_words,idempotent_residual_words,selfadjoint_residual_words,ok\n"
      << report.N << ',' << report.n << ',' << report.size << ',' << report.isometry_residual_words << ','
      << report.idempotent_residual_words << ',' << report.selfadjoint_residual_words << ','
      << (report.ok() ? "true" : "false") << '\n';
  out.csv = csv.str();
  return out;
}

Report run_spectrum(const RunConfig& c) {
  require_n(c, 1);
  const int cutoff = require_cutoff(c, 20);
  const double d = dirac_d(c);
  const auto mult = multiplicities(c.n, cutoff);

  // Enumeration over the box whenever it stays small.
  json enumerated = nullptr;
  bool agrees = true;
  if (std::pow(cutoff + 1.0, c.n) <= 2e6) {
    const TruncatedSpace box(c.n, cutoff);
    std::vector<long> counts(mult.size(), 0);
    for (std::size_t i = 0; i < box.size(); ++i) {
      long total = 0;
      for (int v : box.basis(i)) total += v;
      if (total <= cutoff) ++counts[static_cast<std::size_t>(total)];
    }
    agrees = counts == mult;
    enumerated = agrees;
  }
  json degree = nullptr;
  if (cutoff >= c.n + 1) degree = polynomial_degree(mult);

  const auto checks = check_dirac(DiracOperator(c.n, d, std::make_shared<const TruncatedSpace>(c.n, std::min(cutoff, 4))));

  Report out;
  json rows = json::array();
  for (int l = 0; l <= cutoff; ++l) rows.push_back({{"lambda", l}, {"multiplicity", mult[static_cast<std::size_t>(l)]}});
  out.ok = agrees && checks.ok() && (degree.is_null() || degree.get<int>() == c.n - 1);
  out.body = {{"schema", "qcpn.spectrum/1"},
              {"n", c.n},
              {"d", d},
              {"cutoff", cutoff},
              {"rows", rows},
              {"enumeration_agrees", enumerated},
              {"degree", degree},
              {"dirac",
               {{"self_adjoint", checks.self_adjoint},
                {"F_involution", checks.F_involution},
                {"grading_anticommutes", checks.grading_anticommutes},
                {"D_is_abs_times_F", checks.D_is_abs_times_F}}},
              {"ok", out.ok}};
  out.csv = spectrum_csv(c.n, cutoff);
  return out;
}

Report run_commutators(const RunConfig& c, const QValue& q) {
  require_n(c, 1);
  const int cutoff = require_cutoff(c, 20);
  const double d = dirac_d(c);
  PowerIterationOptions options;
  options.seed = c.seed;
  Report out;
  json entries = json::array();
  std::ostringstream csv;
  csv << "i,j,cutoff,norm,iterations,converged\n";
  for (int i = 0; i <= c.n; ++i)
    for (int j = 0; j <= c.n; ++j) {
      const auto norms = commutator_norm(c.n, i, j, q.value, {cutoff, 2 * cutoff}, d, options);
      const double a = norms[0].estimate.norm;
      const double b = norms[1].estimate.norm;
      const double change = b == 0 ? std::fabs(a) : std::fabs(b - a) / b;
      const bool stable = norms[0].estimate.converged && norms[1].estimate.converged &&
                          (b == 0 ? a == 0 : change <= kStabilityTolerance);
      out.ok = out.ok && stable;
      entries.push_back({{"i", i}, {"j", j}, {"norms", to_json(norms)}, {"relative_change", change}, {"stable", stable}});
      for (const auto& r : norms)
        csv << i << ',' << j << ',' << r.cutoff << ',' << csv_number(r.estimate.norm) << ',' << r.estimate.iterations
            << ',' << (r.estimate.converged ? "true" : "false") << '\n';
    }
  out.body = {{"schema", "qcpn.commutators/1"},
              {"n", c.n},
              {"q", q.value},
              {"d", d},
              {"seed", c.seed},
              {"cutoffs", {cutoff, 2 * cutoff}},
              {"tolerance", kStabilityTolerance},
              {"entries", entries},
              {"ok", out.ok}};
  out.csv = csv.str();
  return out;
}

std::string render(const Report& r, Format format) {
  switch (format) {
    case Format::kJson:
      return r.body.dump(2) + "\n";
    case Format::kCsv:
      return r.csv;
    case Format::kText:
      break;
  }
  std::ostringstream out;
  flatten(r.body, "", out);
  return out.str();
}

}  // namespace

QValue parse_q(std::string_view text) {
  QValue out;
  const bool rational = text.find('/') != std::string_view::npos ||
                        text.find_first_not_of("+-0123456789") == std::string_view::npos;
  if (text.empty()) throw ConfigError("q is empty");
  if (rational) {
    try {
      out.exact = parse_rational(text);
    } catch (const std::invalid_argument&) {
      throw ConfigError("cannot parse q: " + std::string(text));
    }
    out.value = out.exact->get_d();
    if (*out.exact <= 0 || *out.exact >= 1) throw ConfigError("q must lie in (0, 1)");
    return out;
  }
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out.value);
  if (ec != std::errc() || ptr != end || !std::isfinite(out.value))
    throw ConfigError("cannot parse q: " + std::string(text));
  if (!(out.value > 0 && out.value < 1)) throw ConfigError("q must lie in (0, 1)");
  return out;
}

Command parse_command(std::string_view text) {
  if (text == "pair") return Command::kPair;
  if (text == "verify-relations") return Command::kVerifyRelations;
  if (text == "verify-projection") return Command::kVerifyProjection;
  if (text == "spectrum") return Command::kSpectrum;
  if (text == "commutators") return Command::kCommutators;
  throw ConfigError("unknown command: " + std::string(text));
}

Format parse_format(std::string_view text) {
  if (text == "json") return Format::kJson;
  if (text == "csv") return Format::kCsv;
  if (text == "text") return Format::kText;
  throw ConfigError("unknown format: " + std::string(text));
}

std::string to_string(Command c) {
  switch (c) {
    case Command::kPair:
      return "pair";
    case Command::kVerifyRelations:
      return "verify-relations";
    case Command::kVerifyProjection:
      return "verify-projection";
    case Command::kSpectrum:
      return "spectrum";
    case Command::kCommutators:
      break;
  }
  return "commutators";
}

RunResult run(const RunConfig& config) {
  RunResult result;
  Report report;
  try {
    const QValue q = parse_q(config.q);
    switch (config.command) {
      case Command::kPair:
        report = run_pair(config, q);
        break;
      case Command::kVerifyRelations:
        report = run_verify_relations(config, q);
        break;
      case Command::kVerifyProjection:
        report = run_verify_projection(config);
        break;
      case Command::kSpectrum:
        report = run_spectrum(config);
        break;
      case Command::kCommutators:
        report = run_commutators(config, q);
        break;
    }
  } catch (const std::invalid_argument& e) {
    // Modules reject out-of-range parameters with invalid_argument.
    result.status = kExitConfig;
    result.error = e.what();
    return result;
  }
  result.status = report.ok ? kExitOk : kExitFailed;
  result.report = render(report, config.format);
  if (!config.output.empty()) {
    std::ofstream file(config.output, std::ios::binary);
    file << result.report;
    if (!file) {
      result.status = kExitConfig;
      result.error = "cannot write " + config.output;
    }
  }
  return result;
}

}  // namespace qcpn::cli

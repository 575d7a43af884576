#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcpn/qpoly.hpp"

namespace qcpn::cli {

enum class Command { kPair, kVerifyRelations, kVerifyProjection, kSpectrum, kCommutators };
enum class Format { kJson, kCsv, kText };

/// Invalid command-line configuration; maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// q given as "1/2" keeps its exact value; "0.5" is float only.
struct QValue {
  double value = 0;
  std::optional<Rational> exact;
};

/// Throws ConfigError unless the text is a number in (0, 1).
QValue parse_q(std::string_view text);
Command parse_command(std::string_view text);
Format parse_format(std::string_view text);
std::string to_string(Command c);

struct RunConfig {
  Command command = Command::kPair;
  int n = 1;
  int k = 1;
  int N = 1;
  std::string q = "1/2";
  std::optional<int> cutoff;  // per-command default when unset
  std::optional<double> d;    // defaults to n
  std::uint64_t seed = 12345;
  Format format = Format::kJson;
  std::string output;  // empty: the caller prints the report
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

struct RunResult {
  int status = kExitOk;
  std::string report;  // empty on config errors
  std::string error;
};

/// Runs one command. Writes the report to config.output when it is set.
RunResult run(const RunConfig& config);

}  // namespace qcpn::cli

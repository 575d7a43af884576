#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcpn/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pairings, projections and spectra on quantum projective spaces"};
  app.set_version_flag("--version", "qcpn 0.1.0");

  std::string command;
  std::string format = "json";
  qcpn::cli::RunConfig config;
  app.add_option("command", command, "pair | verify-relations | verify-projection | spectrum | commutators")
      ->required();
  app.add_option("--n", config.n, "Dimension of CP^n_q");
  app.add_option("--k", config.k, "Fredholm module index");
  app.add_option("--N", config.N, "Line bundle degree");
  app.add_option("--q", config.q, "Deformation parameter, rational (1/2) or float (0.5)");
  app.add_option("--cutoff", config.cutoff, "Truncation cutoff");
  app.add_option("--d", config.d, "Dirac exponent parameter (default n)");
  app.add_option("--seed", config.seed, "Seed for sampling and power iteration");
  app.add_option("--format", format, "json | csv | text");
  app.add_option("--output", config.output, "Write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcpn::cli::kExitConfig;
  }

  try {
    config.command = qcpn::cli::parse_command(command);
    config.format = qcpn::cli::parse_format(format);
  } catch (const qcpn::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qcpn::cli::kExitConfig;
  }

  const auto result = qcpn::cli::run(config);
  if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
  if (config.output.empty()) std::cout << result.report;
  return result.status;
}

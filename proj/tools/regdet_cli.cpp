#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include "regdet/cli.hpp"

int main(int argc, char** argv) {
  regdet::RunConfig cfg;
  std::string command;
  std::string out_path;
  std::string format = "json";

  CLI::App app{"Regularized determinants, heat traces and Green's-function finite parts on model surfaces"};
  app.add_option("command", command, "heat-trace | det-zeta | det2 | cf | verify-anomaly | verify-mainlemma | "
                                     "verify-massless | gff-verify | verify-all")
      ->required();
  app.add_option("--surface", cfg.surface, "sphere:R=<r> or torus:L1=<a>,L2=<b>");
  app.add_option("--m0", cfg.m0, "bare mass m0");
  app.add_option("--m1", cfg.m1, "mass shift m1 (adds m1^2)");
  app.add_option("--sigma", cfg.sigma, "massless-background mass term sigma");
  app.add_option("--tol", cfg.tol, "tolerance");
  app.add_option("--lambda-max", cfg.lambda_max, "eigenvalue cutoff");
  app.add_option("--t", cfg.t, "heat-trace time");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, "worker threads (default: REGDET_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (cfg.threads == 0) {
    if (const char* env = std::getenv("REGDET_THREADS")) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0') cfg.threads = static_cast<unsigned>(v);
    }
  }
  cfg.format = format == "csv" ? regdet::OutputFormat::Csv : regdet::OutputFormat::Json;

  const regdet::RunOutcome outcome = regdet::run(command, cfg);
  if (outcome.document.contains("error")) {
    std::cerr << "regdet: " << outcome.document["error"]["message"].get<std::string>() << "\n";
  }
  const std::string text = regdet::render(outcome, cfg.format);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(out_path);
    if (!file) {
      std::cerr << "regdet: cannot write " << out_path << "\n";
      return 1;
    }
    file << text;
  }
  return outcome.exit_code;
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regdet/report.hpp"

namespace regdet {

enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::string surface = "sphere:R=1";
  double m0 = 1.0;  // bare mass (not squared)
  double m1 = 1.0;  // mass shift, m1^2 is the added mass term
  double sigma = 1.0;
  double tol = 1e-6;
  double lambda_max = -1.0;  // negative: command default
  double t = 1.0;             // heat-trace time
  std::uint64_t seed = 20240917;
  std::uint64_t samples = 0;  // 0: command default
  OutputFormat format = OutputFormat::Json;
  unsigned threads = 0;  // 0: leave the worker count alone
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 usage/validation error, 2 check failure
  Json document;
};

const std::vector<std::string>& cli_commands();

/// Dispatches one command. Validation errors are caught and reported in the
/// document with exit code 1; nothing is thrown.
RunOutcome run(const std::string& command, const RunConfig& config);

/// The document rendered in the configured format.
std::string render(const RunOutcome& outcome, OutputFormat format);

}  // namespace regdet

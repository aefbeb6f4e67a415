#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpnls/dynamics.hpp"
#include "qpnls/normal_form.hpp"
#include "qpnls/potential.hpp"
#include "qpnls/resonance.hpp"

namespace qpnls {

enum class ExperimentKind { Simulate, NormalForm, Measure, Verify };

std::string to_string(ExperimentKind k);

/// One verdict produced by a run: a measured value against its target.
/// `enforced` checks decide the process exit status.
struct Check {
  std::string name;
  double measured = 0;
  double bound = 0;
  std::string bound_expr;  // human-readable target, e.g. "2*eps^0.9"
  bool pass = false;
  bool enforced = true;
};

struct RunConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::Verify;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::string format = "csv";  // csv | json
  int workers = 1;
  PotentialSpec potential;

  // simulate
  ExperimentConfig experiment;
  // normal-form
  BnfConfig bnf;
  // measure
  ResonanceParams resonance;
  long measure_samples = 10000;
};

/// Parses and validates a JSON run configuration. Unknown keys are errors;
/// defaults are filled so the config echoed by `run` is complete.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
std::string config_to_text(const RunConfig& cfg);

struct RunOutcome {
  std::vector<Check> checks;
  bool pass = true;  // all enforced checks
  std::vector<std::string> artifacts;
};

/// Dispatches the experiment, writes artifacts (resolved-config, tables,
/// summary.json) under cfg.output_dir, and reports the checks. Exit status
/// of the CLI is nonzero iff an enforced check fails.
RunOutcome run(const RunConfig& cfg);

/// The built-in verification battery behind the `verify` subcommand.
std::vector<Check> run_verification_battery(std::uint64_t seed);

}  // namespace qpnls

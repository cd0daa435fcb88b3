/* Copyright 2026 The Specpulse Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "specpulse/optimize.hpp"

namespace specpulse::cli {

/// Raised for bad configuration values; mapped to exit code 1.
/// The message names the offending key, the value, and the valid range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment settings as parsed from the config file and flags. Defaults:
/// dt = 0.2, 128 slices for up to three qubits and 512 from four qubits on,
/// mu = 0.05 (constrained), delta = n/4, 120 runs.
struct ExperimentConfig {
  int qubits = 3;
  std::string target = "not";  // "not" or "swap"
  int slices = 0;              // 0 = default for the qubit count
  double dt = 0.2;
  double mu = 0.05;
  std::string delta = "n/4";  // integer literal or the symbolic "n/4"
  int runs = 120;
  std::uint64_t seed = 42;
  int oversample = 16;
  std::string out = "out";
  // Advanced knobs, not part of the config file.
  int max_iterations = 2000;
  double amplitude = 1.0;  // uniform initialization range, units of J
  int workers = 0;         // 0 = hardware concurrency
};

/// Which config-file keys exist; anything else is rejected.
ExperimentConfig load_config_file(const std::string& path);

struct ResolvedExperiment {
  ExperimentConfig input;
  int slices = 0;
  int delta = 0;
  double omega0 = 0.0;
  ObjectiveSpec spec;
  OptimizerConfig optimizer;
};

/// Validates every field against the module preconditions and builds the
/// system, target and band. Throws ValidationError with key/value/range.
ResolvedExperiment resolve(const ExperimentConfig& config);

/// Runs the ensemble and writes results.csv, summary.csv, histogram.csv and
/// one controls_NNNN.csv dump per run into the output directory. The output
/// files are byte-identical for identical configs. Returns the results.
std::vector<RunResult> cmd_run(const ResolvedExperiment& experiment, std::ostream& log);

struct FilterArgs {
  std::string dump_path;
  double omega0 = 0.0;   // 0 = derive from the dump's band (delta header)
  int delta = -1;        // -1 = take from the dump header
  int oversample = 16;
  std::string out;       // output file; default <dump>_filtered.csv
};

struct FilterOutcome {
  double f_pre = 0.0;   // fidelity of the step controls, recomputed
  double f_post = 0.0;  // fidelity after the ideal low-pass filter
  std::string out_path;
};

/// Reads a control dump, recomputes the unfiltered fidelity, applies the
/// ideal low-pass filter and writes the oversampled filtered pulse table.
FilterOutcome cmd_filter(const FilterArgs& args, std::ostream& log);

/// Runs the built-in property suite; prints one line per check.
/// Returns true when everything passed.
bool cmd_selftest(std::ostream& log);

// --- control dump format (shared with tests) --------------------------------

struct ControlDump {
  std::map<std::string, std::string> header;  // "# key=value" lines
  ControlSequence controls;
};

void write_control_dump(const std::string& path,
                        const std::map<std::string, std::string>& header,
                        const ControlSequence& controls);
ControlDump read_control_dump(const std::string& path);

/// Shortest decimal form with 17 significant digits ("%.17g").
std::string format_double(double value);

}  // namespace specpulse::cli

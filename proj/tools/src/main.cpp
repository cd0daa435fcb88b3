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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

// Exit codes: 0 success, 1 validation error, 2 runtime/numerical error,
// 3 selftest failure.
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;
constexpr int kSelftest = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace specpulse;

  CLI::App app{"specpulse - spectrally constrained control pulses for Heisenberg spin chains"};
  app.require_subcommand(1);

  // --- run ------------------------------------------------------------------
  cli::ExperimentConfig cfg;
  std::string config_path;
  CLI::App* run = app.add_subcommand(
      "run", "Synthesize a multi-start pulse ensemble and write result tables");
  run->add_option("--config", config_path, "JSON config file; flags override its values");
  auto* opt_qubits = run->add_option("--qubits", cfg.qubits, "Chain length (1-10)");
  auto* opt_target = run->add_option("--target", cfg.target, "Target gate: not | swap");
  auto* opt_slices = run->add_option("--slices", cfg.slices,
                                     "Pulse slices per direction (default 128, 512 for >= 4 qubits)");
  auto* opt_dt = run->add_option("--dt", cfg.dt, "Slice duration in 1/J");
  auto* opt_mu = run->add_option("--mu", cfg.mu, "Fidelity weight in [0, 1]; 1 = unconstrained");
  auto* opt_delta = run->add_option("--delta", cfg.delta, "Band half-width: integer or n/4");
  auto* opt_runs = run->add_option("--runs", cfg.runs, "Independent optimization runs");
  auto* opt_seed = run->add_option("--seed", cfg.seed, "Base seed; run j uses seed + j");
  auto* opt_oversample =
      run->add_option("--oversample", cfg.oversample, "Sub-slices per slice for filtering");
  auto* opt_out = run->add_option("--out", cfg.out, "Output directory");
  auto* opt_iters = run->add_option("--max-iters", cfg.max_iterations, "BFGS iteration cap");
  auto* opt_amplitude =
      run->add_option("--amplitude", cfg.amplitude, "Uniform initialization range, units of J");
  auto* opt_workers = run->add_option("--workers", cfg.workers, "Worker threads (0 = auto)");

  // --- filter ---------------------------------------------------------------
  cli::FilterArgs filter_args;
  CLI::App* filter = app.add_subcommand(
      "filter", "Low-pass filter a control dump and report the fidelity before/after");
  filter->add_option("dump", filter_args.dump_path, "controls_NNNN.csv produced by run")
      ->required();
  filter->add_option("--omega0", filter_args.omega0,
                     "Cutoff angular frequency (default: from the dump's band)");
  filter->add_option("--delta", filter_args.delta, "Band half-width overriding the dump header");
  filter->add_option("--oversample", filter_args.oversample, "Sub-slices per slice");
  filter->add_option("--out", filter_args.out, "Output table (default <dump>_filtered.csv)");

  // --- selftest ---------------------------------------------------------------
  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the built-in numerical property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return kValidation;
  }

  try {
    if (run->parsed()) {
      cli::ExperimentConfig merged;
      if (!config_path.empty()) merged = cli::load_config_file(config_path);
      if (*opt_qubits) merged.qubits = cfg.qubits;
      if (*opt_target) merged.target = cfg.target;
      if (*opt_slices) merged.slices = cfg.slices;
      if (*opt_dt) merged.dt = cfg.dt;
      if (*opt_mu) merged.mu = cfg.mu;
      if (*opt_delta) merged.delta = cfg.delta;
      if (*opt_runs) merged.runs = cfg.runs;
      if (*opt_seed) merged.seed = cfg.seed;
      if (*opt_oversample) merged.oversample = cfg.oversample;
      if (*opt_out) merged.out = cfg.out;
      if (*opt_iters) merged.max_iterations = cfg.max_iterations;
      if (*opt_amplitude) merged.amplitude = cfg.amplitude;
      if (*opt_workers) merged.workers = cfg.workers;
      cli::cmd_run(cli::resolve(merged), std::cout);
      return kOk;
    }
    if (filter->parsed()) {
      cli::cmd_filter(filter_args, std::cout);
      return kOk;
    }
    if (selftest->parsed()) {
      return cli::cmd_selftest(std::cout) ? kOk : kSelftest;
    }
  } catch (const cli::ValidationError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kValidation;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kRuntime;
  }
  return kOk;
}

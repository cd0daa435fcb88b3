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
#include <functional>
#include <string>
#include <vector>

#include "specpulse/filter.hpp"
#include "specpulse/spectral.hpp"

namespace specpulse {

struct OptimizerConfig {
  int max_iterations = 2000;
  double grad_tolerance = 1e-8;  // stop when ||grad||_inf < grad_tolerance
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double init_amplitude = 1.0;  // uniform initialization range, units of J
  std::uint64_t seed = 0;
};

enum class MinimizeStatus {
  GradientConverged,
  MaxIterations,
  LineSearchFailed,   // returned best-so-far
  ObjectiveAborted,   // objective raised its abort flag (fidelity singular)
};

const char* to_string(MinimizeStatus status);

/// Objective callback: returns f(x) and fills grad (resized by the callee).
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct MinimizeResult {
  Eigen::VectorXd x;         // best accepted iterate
  double value = 0.0;        // f at x
  Eigen::VectorXd gradient;  // grad f at x
  int iterations = 0;        // accepted BFGS steps
  MinimizeStatus status = MinimizeStatus::MaxIterations;
  std::vector<double> trace;  // f at the initial point and each accepted step
};

/// Dense BFGS with a strong-Wolfe line search (bracket + cubic-interpolation
/// zoom). The inverse Hessian approximation is rescaled after the first step;
/// updates with non-positive curvature are skipped. Accepted iterates never
/// increase f. If `abort` is non-null and becomes true after an evaluation,
/// the search stops with ObjectiveAborted.
MinimizeResult bfgs_minimize(const ObjectiveFn& objective, const Eigen::VectorXd& x0,
                             const OptimizerConfig& config, const bool* abort = nullptr);

/// hx, hy i.i.d. uniform on [-amplitude, amplitude], drawn from mt19937_64
/// seeded with `seed` through the 53-bit mantissa mapping
/// u = (next() >> 11) * 2^-53, value = amplitude * (2u - 1):
/// bit-for-bit reproducible for a given seed. hx is drawn first, then hy.
ControlSequence init_controls(std::uint64_t seed, int slice_count, double dt,
                              double amplitude);

struct PulseSynthesis {
  ControlSequence controls;  // best controls found
  MinimizeResult details;
};

/// BFGS minimization of G over the stacked control vector [hx ; hy].
PulseSynthesis minimize(const ObjectiveSpec& spec, const ControlSequence& init,
                        const OptimizerConfig& config);

struct RunResult {
  std::uint64_t seed = 0;
  int iterations = 0;
  MinimizeStatus status = MinimizeStatus::MaxIterations;
  double final_objective = 0.0;
  double pre_filter_fidelity = 0.0;
  double post_filter_fidelity = 0.0;
  double power_x = 0.0;
  double power_y = 0.0;
  ControlSequence controls;
  std::string error;  // non-empty when the run raised instead of finishing
};

/// Multi-start ensemble: run j draws its start from seed config.seed + j,
/// minimizes G, then evaluates the pre-filter fidelity and the post-filter
/// fidelity under the ideal low-pass filter with omega0 = cutoff_from_band.
/// Runs execute on `workers` threads (0 = hardware concurrency) but each run
/// is self-contained and results are returned in run order, so the output is
/// identical for any worker count. Failed runs are recorded via their
/// status, never dropped. `progress`, when set, is invoked once per finished
/// run (serialized, completion order).
std::vector<RunResult> run_experiment(const ObjectiveSpec& spec, const OptimizerConfig& config,
                                      int n_runs, int oversample = 16, int workers = 0,
                                      const std::function<void(const RunResult&)>& progress = {});

}  // namespace specpulse

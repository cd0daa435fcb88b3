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

#include "specpulse/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace specpulse {

namespace {

struct LinePoint {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative along the search direction
};

struct LineSearchOutcome {
  bool found = false;     // strong Wolfe point found
  bool aborted = false;   // objective raised the abort flag
  bool improved = false;  // best point strictly below the start value
  double alpha = 0.0;
  double value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
};

/// Minimizer of the cubic interpolant through two (alpha, value, slope)
/// samples; NaN when the interpolant has no interior minimizer.
double cubic_minimizer(const LinePoint& a, const LinePoint& b) {
  const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
  const double radicand = d1 * d1 - a.slope * b.slope;
  if (radicand < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(radicand), b.alpha - a.alpha);
  const double denom = b.slope - a.slope + 2.0 * d2;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
}

class LineSearch {
 public:
  LineSearch(const ObjectiveFn& objective, const bool* abort, const Eigen::VectorXd& x0,
             const Eigen::VectorXd& direction, double value0, double slope0, double c1,
             double c2)
      : objective_(objective),
        abort_(abort),
        x0_(x0),
        direction_(direction),
        value0_(value0),
        slope0_(slope0),
        c1_(c1),
        c2_(c2) {
    best_.value = value0;
  }

  /// Bracketing phase of the strong Wolfe search; expands from alpha = 1.
  LineSearchOutcome run() {
    LinePoint prev{0.0, value0_, slope0_};
    double alpha = 1.0;
    constexpr double kAlphaMax = 1e10;
    for (int iter = 0; iter < 60; ++iter) {
      LinePoint cur = evaluate(alpha);
      if (aborted_) return abort_outcome();
      if (cur.value > value0_ + c1_ * cur.alpha * slope0_ ||
          (iter > 0 && cur.value >= prev.value))
        return zoom(prev, cur);
      if (std::abs(cur.slope) <= -c2_ * slope0_) return accept(cur);
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = cur;
      alpha = std::min(2.0 * alpha, kAlphaMax);
      if (prev.alpha >= kAlphaMax) break;
    }
    return fail_outcome();
  }

 private:
  LinePoint evaluate(double alpha) {
    trial_x_ = x0_ + alpha * direction_;
    const double value = objective_(trial_x_, trial_grad_);
    if (abort_ && *abort_) aborted_ = true;
    // Track the best strictly-improving point for graceful failure.
    if (value < best_.value) {
      best_ = LinePoint{alpha, value, trial_grad_.dot(direction_)};
      best_x_ = trial_x_;
      best_grad_ = trial_grad_;
      has_best_ = true;
    }
    return LinePoint{alpha, value, trial_grad_.dot(direction_)};
  }

  LineSearchOutcome accept(const LinePoint& point) {
    LineSearchOutcome out;
    out.found = true;
    out.improved = true;
    out.alpha = point.alpha;
    out.value = point.value;
    // The accepted point is always the latest evaluation.
    out.x = trial_x_;
    out.grad = trial_grad_;
    return out;
  }

  LineSearchOutcome zoom(LinePoint lo, LinePoint hi) {
    for (int iter = 0; iter < 50; ++iter) {
      const double width = std::abs(hi.alpha - lo.alpha);
      if (width < 1e-14 * std::max(1.0, std::abs(lo.alpha))) break;

      double alpha = cubic_minimizer(lo, hi);
      const double lower = std::min(lo.alpha, hi.alpha) + 0.05 * width;
      const double upper = std::max(lo.alpha, hi.alpha) - 0.05 * width;
      if (!(alpha >= lower && alpha <= upper))
        alpha = 0.5 * (lo.alpha + hi.alpha);

      LinePoint cur = evaluate(alpha);
      if (aborted_) return abort_outcome();
      if (cur.value > value0_ + c1_ * cur.alpha * slope0_ || cur.value >= lo.value) {
        hi = cur;
      } else {
        if (std::abs(cur.slope) <= -c2_ * slope0_) return accept(cur);
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
    }
    return fail_outcome();
  }

  LineSearchOutcome abort_outcome() {
    LineSearchOutcome out = fail_outcome();
    out.aborted = true;
    return out;
  }

  LineSearchOutcome fail_outcome() {
    LineSearchOutcome out;
    if (has_best_) {
      out.improved = true;
      out.alpha = best_.alpha;
      out.value = best_.value;
      out.x = best_x_;
      out.grad = best_grad_;
    }
    return out;
  }

  const ObjectiveFn& objective_;
  const bool* abort_;
  const Eigen::VectorXd& x0_;
  const Eigen::VectorXd& direction_;
  double value0_, slope0_, c1_, c2_;
  Eigen::VectorXd trial_x_, trial_grad_;
  LinePoint best_;
  Eigen::VectorXd best_x_, best_grad_;
  bool has_best_ = false;
  bool aborted_ = false;
};

void check_config(const OptimizerConfig& config) {
  if (config.max_iterations < 1)
    throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  if (!(config.grad_tolerance > 0.0))
    throw std::invalid_argument("optimizer: grad_tolerance must be > 0");
  if (!(config.wolfe_c1 > 0.0 && config.wolfe_c1 < config.wolfe_c2 && config.wolfe_c2 < 1.0))
    throw std::invalid_argument("optimizer: need 0 < c1 < c2 < 1");
}

}  // namespace

const char* to_string(MinimizeStatus status) {
  switch (status) {
    case MinimizeStatus::GradientConverged: return "converged";
    case MinimizeStatus::MaxIterations: return "max_iterations";
    case MinimizeStatus::LineSearchFailed: return "line_search_failed";
    case MinimizeStatus::ObjectiveAborted: return "fidelity_singular";
  }
  return "unknown";
}

MinimizeResult bfgs_minimize(const ObjectiveFn& objective, const Eigen::VectorXd& x0,
                             const OptimizerConfig& config, const bool* abort) {
  check_config(config);
  const Eigen::Index dim = x0.size();

  MinimizeResult result;
  result.x = x0;
  result.gradient.resize(dim);
  result.value = objective(result.x, result.gradient);
  result.trace.push_back(result.value);
  if (abort && *abort) {
    result.status = MinimizeStatus::ObjectiveAborted;
    return result;
  }

  // Identity initial inverse Hessian, kept unscaled: the usual first-step
  // curvature rescaling lets the search take huge steps along the nearly
  // flat rays of the power-fraction term, inflating out-of-band amplitude.
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(dim, dim);

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (result.gradient.lpNorm<Eigen::Infinity>() < config.grad_tolerance) {
      result.status = MinimizeStatus::GradientConverged;
      result.iterations = iter;
      return result;
    }

    Eigen::VectorXd direction = -(inv_hessian * result.gradient);
    double slope = direction.dot(result.gradient);
    if (!(slope < 0.0)) {
      // Lost positive definiteness to rounding; restart from steepest descent.
      inv_hessian.setIdentity();
      direction = -result.gradient;
      slope = -result.gradient.squaredNorm();
    }

    LineSearch search(objective, abort, result.x, direction, result.value, slope,
                      config.wolfe_c1, config.wolfe_c2);
    const LineSearchOutcome outcome = search.run();

    if (outcome.aborted) {
      result.status = MinimizeStatus::ObjectiveAborted;
      result.iterations = iter;
      if (outcome.improved && outcome.value < result.value) {
        result.x = outcome.x;
        result.value = outcome.value;
        result.gradient = outcome.grad;
        result.trace.push_back(result.value);
      }
      return result;
    }
    if (!outcome.found) {
      // Keep the best strictly-improving evaluation, then stop.
      result.status = MinimizeStatus::LineSearchFailed;
      result.iterations = iter;
      if (outcome.improved && outcome.value < result.value) {
        result.x = outcome.x;
        result.value = outcome.value;
        result.gradient = outcome.grad;
        result.trace.push_back(result.value);
        result.iterations = iter + 1;
      }
      return result;
    }

    const Eigen::VectorXd step = outcome.x - result.x;
    const Eigen::VectorXd grad_change = outcome.grad - result.gradient;
    const double curvature = step.dot(grad_change);
    if (rescale_pending && curvature > 0.0) {
      inv_hessian *= curvature / grad_change.squaredNorm();
      rescale_pending = false;
    }
    if (curvature > 1e-12 * step.norm() * grad_change.norm()) {
      // H <- (I - r s y^T) H (I - r y s^T) + r s s^T, expanded to rank-2 form.
      const double rho = 1.0 / curvature;
      const Eigen::VectorXd hy = inv_hessian * grad_change;
      const double yhy = grad_change.dot(hy);
      inv_hessian.noalias() -= rho * (step * hy.transpose() + hy * step.transpose());
      inv_hessian.noalias() += (rho * rho * yhy + rho) * (step * step.transpose());
    }

    result.x = outcome.x;
    result.value = outcome.value;
    result.gradient = outcome.grad;
    result.trace.push_back(result.value);
    result.iterations = iter + 1;
  }

  result.status = MinimizeStatus::MaxIterations;
  return result;
}

ControlSequence init_controls(std::uint64_t seed, int slice_count, double dt,
                              double amplitude) {
  if (slice_count < 1) throw std::invalid_argument("init_controls: slice_count must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("init_controls: dt must be > 0");
  if (amplitude < 0.0) throw std::invalid_argument("init_controls: amplitude must be >= 0");

  std::mt19937_64 generator(seed);
  const auto draw = [&generator, amplitude] {
    // 53-bit mapping to [0, 1); keeps the stream identical on every platform.
    const double uniform = static_cast<double>(generator() >> 11) * 0x1.0p-53;
    return amplitude * (2.0 * uniform - 1.0);
  };

  ControlSequence controls;
  controls.dt = dt;
  controls.hx.resize(slice_count);
  controls.hy.resize(slice_count);
  for (int i = 0; i < slice_count; ++i) controls.hx[i] = draw();
  for (int i = 0; i < slice_count; ++i) controls.hy[i] = draw();
  return controls;
}

PulseSynthesis minimize(const ObjectiveSpec& spec, const ControlSequence& init,
                        const OptimizerConfig& config) {
  const int n = init.slice_count();
  Eigen::VectorXd x0(2 * n);
  x0.head(n) = init.hx;
  x0.tail(n) = init.hy;

  bool singular = false;
  const double dt = init.dt;
  const ObjectiveFn objective_fn = [&spec, &singular, n, dt](const Eigen::VectorXd& x,
                                                             Eigen::VectorXd& grad) {
    const ControlSequence controls{dt, x.head(n), x.tail(n)};
    const ObjectiveValue value = objective(spec, controls);
    grad = value.gradient;
    if (value.fidelity_singular) singular = true;
    return value.value;
  };

  PulseSynthesis synthesis;
  synthesis.details = bfgs_minimize(objective_fn, x0, config, &singular);
  synthesis.controls =
      ControlSequence{dt, synthesis.details.x.head(n), synthesis.details.x.tail(n)};
  return synthesis;
}

std::vector<RunResult> run_experiment(const ObjectiveSpec& spec, const OptimizerConfig& config,
                                      int n_runs, int oversample, int workers,
                                      const std::function<void(const RunResult&)>& progress) {
  if (n_runs < 1) throw std::invalid_argument("run_experiment: n_runs must be >= 1");
  if (oversample < 1) throw std::invalid_argument("run_experiment: oversample must be >= 1");
  const double omega0 =
      cutoff_from_band(spec.band.signal_length, spec.band.half_width, spec.dt);
  const FilterSpec filter{omega0, oversample};

  std::vector<RunResult> results(static_cast<std::size_t>(n_runs));
  std::mutex progress_mutex;
  const auto one_run = [&](int run_index) {
    RunResult& out = results[static_cast<std::size_t>(run_index)];
    out.seed = config.seed + static_cast<std::uint64_t>(run_index);
    try {
      OptimizerConfig run_config = config;
      run_config.seed = out.seed;
      const ControlSequence start = init_controls(out.seed, spec.band.signal_length,
                                                  spec.dt, config.init_amplitude);
      const PulseSynthesis synthesis = minimize(spec, start, run_config);
      out.iterations = synthesis.details.iterations;
      out.status = synthesis.details.status;
      out.final_objective = synthesis.details.value;
      out.controls = synthesis.controls;
      out.pre_filter_fidelity =
          gate_fidelity(spec.target, propagate_total(spec.system, synthesis.controls));
      out.post_filter_fidelity =
          filtered_fidelity(spec.system, synthesis.controls, spec.target, filter);
      out.power_x = power_fraction(synthesis.controls.hx, spec.band);
      out.power_y = power_fraction(synthesis.controls.hy, spec.band);
    } catch (const std::exception& exc) {
      out.error = exc.what();
      out.pre_filter_fidelity = std::numeric_limits<double>::quiet_NaN();
      out.post_filter_fidelity = std::numeric_limits<double>::quiet_NaN();
    }
    if (progress) {
      const std::scoped_lock lock(progress_mutex);
      progress(out);
    }
  };

  int pool = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  pool = std::max(1, std::min(pool, n_runs));
  if (pool == 1) {
    for (int j = 0; j < n_runs; ++j) one_run(j);
    return results;
  }

  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (int j = next.fetch_add(1); j < n_runs; j = next.fetch_add(1)) one_run(j);
    });
  }
  for (std::thread& thread : threads) thread.join();
  return results;
}

}  // namespace specpulse

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

#include "specpulse/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "specpulse/filter.hpp"
#include "specpulse/model.hpp"
#include "specpulse/optimize.hpp"
#include "specpulse/spectral.hpp"

namespace specpulse::selftest {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniform_pm(std::mt19937_64& gen, double amplitude) {
  return amplitude * (2.0 * uniform01(gen) - 1.0);
}

Eigen::VectorXd random_vector(std::mt19937_64& gen, int n, double amplitude) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform_pm(gen, amplitude);
  return v;
}

double simpson_recurse(const std::function<double(double)>& f, double a, double b,
                       double fa, double fm, double fb, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

std::string format_detail(const char* fmt, double value) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), fmt, value);
  return buffer;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48);
}

double sine_integral_quadrature(double x) {
  const double magnitude = std::abs(x);
  const auto integrand = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  // Chunks no longer than one period keep the adaptive refinement local.
  const double chunk = 2.0 * kPi;
  double sum = 0.0;
  double lo = 0.0;
  while (lo < magnitude) {
    const double hi = std::min(lo + chunk, magnitude);
    sum += adaptive_simpson(integrand, lo, hi, 1e-14);
    lo = hi;
  }
  return std::signbit(x) ? -sum : sum;
}

double lowpass_convolution_quadrature(const Eigen::VectorXd& h, double dt, double omega0,
                                      double t) {
  const auto kernel = [omega0, t](double s) {
    const double u = t - s;
    if (std::abs(u) < 1e-12) return omega0 / kPi;
    return std::sin(omega0 * u) / (kPi * u);
  };
  const double chunk = kPi / omega0;
  double sum = 0.0;
  for (int i = 0; i < h.size(); ++i) {
    if (h[i] == 0.0) continue;
    double lo = i * dt;
    const double slice_end = (i + 1) * dt;
    double integral = 0.0;
    while (lo < slice_end) {
      const double hi = std::min(lo + chunk, slice_end);
      integral += adaptive_simpson(kernel, lo, hi, 1e-13);
      lo = hi;
    }
    sum += h[i] * integral;
  }
  return sum;
}

GradientCheck finite_difference_check(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    const Eigen::VectorXd& analytic_gradient, double eps, double rel_tol,
    double grad_floor, double abs_tol) {
  GradientCheck check;
  Eigen::VectorXd probe = x;
  for (int i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + eps;
    const double plus = f(probe);
    probe[i] = x[i] - eps;
    const double minus = f(probe);
    probe[i] = x[i];
    const double numeric = (plus - minus) / (2.0 * eps);
    const double analytic = analytic_gradient[i];
    if (std::abs(analytic) < grad_floor) {
      const double abs_error = std::abs(numeric - analytic);
      check.worst_abs_error = std::max(check.worst_abs_error, abs_error);
      if (abs_error > abs_tol) ++check.failed_components;
    } else {
      const double rel_error = std::abs(numeric - analytic) / std::abs(analytic);
      check.worst_rel_error = std::max(check.worst_rel_error, rel_error);
      if (rel_error > rel_tol) ++check.failed_components;
    }
  }
  return check;
}

namespace {

CheckResult check_objective_gradient() {
  std::mt19937_64 gen(7);
  const int qubit_choices[] = {1, 2, 3};
  const int slice_choices[] = {4, 6, 8, 12, 16};
  const double mu_choices[] = {1.0, 0.05, 0.5, 0.0};
  GradientCheck worst;
  for (int trial = 0; trial < 50; ++trial) {
    const int num_qubits = qubit_choices[trial % 3];
    const int n = slice_choices[trial % 5];
    const double mu = mu_choices[trial % 4];
    const double dt = 0.2;
    const SpinChainSystem sys = make_spin_chain(num_qubits);
    const TargetGate target =
        num_qubits >= 2 && trial % 2 == 0 ? target_swap(num_qubits) : target_not(num_qubits);
    const ObjectiveSpec spec =
        make_objective_spec(mu, make_band(n, n / 4), sys, target, dt);

    Eigen::VectorXd x(2 * n);
    x.head(n) = random_vector(gen, n, 1.0);
    x.tail(n) = random_vector(gen, n, 1.0);
    const auto value_of = [&](const Eigen::VectorXd& v) {
      const ControlSequence controls{dt, v.head(n), v.tail(n)};
      return objective(spec, controls).value;
    };
    const ControlSequence controls{dt, x.head(n), x.tail(n)};
    const ObjectiveValue at_x = objective(spec, controls);

    const GradientCheck check = finite_difference_check(value_of, x, at_x.gradient);
    worst.failed_components += check.failed_components;
    worst.worst_rel_error = std::max(worst.worst_rel_error, check.worst_rel_error);
    worst.worst_abs_error = std::max(worst.worst_abs_error, check.worst_abs_error);
  }
  CheckResult result;
  result.name = "objective_gradient_vs_finite_differences";
  result.passed = worst.failed_components == 0;
  result.detail = format_detail("worst rel err %.3e", worst.worst_rel_error) +
                  format_detail(", worst abs err %.3e", worst.worst_abs_error);
  return result;
}

CheckResult check_parseval() {
  std::mt19937_64 gen(11);
  double worst = 0.0;
  for (int n : {4, 17, 64, 128, 512}) {
    for (int rep = 0; rep < 3; ++rep) {
      const Eigen::VectorXd h = random_vector(gen, n, 2.0);
      const Eigen::VectorXcd y = dft(h);
      worst = std::max(worst,
                       std::abs(y.squaredNorm() - h.squaredNorm()) / h.squaredNorm());
    }
  }
  CheckResult result;
  result.name = "dft_parseval";
  result.passed = worst < 1e-10;
  result.detail = format_detail("worst rel err %.3e", worst);
  return result;
}

CheckResult check_unitarity() {
  std::mt19937_64 gen(13);
  double worst = 0.0;
  for (int num_qubits : {1, 2, 3}) {
    const SpinChainSystem sys = make_spin_chain(num_qubits);
    ControlSequence controls;
    controls.dt = 0.2;
    controls.hx = random_vector(gen, 32, 2.0);
    controls.hy = random_vector(gen, 32, 2.0);
    const PropagationResult propagation = propagate(sys, controls);
    const Eigen::Index d = sys.dim();
    const Matrix identity = Matrix::Identity(d, d);
    for (const Matrix& u : propagation.slice_unitaries)
      worst = std::max(worst, (u.adjoint() * u - identity).cwiseAbs().maxCoeff());
    worst = std::max(
        worst,
        (propagation.total.adjoint() * propagation.total - identity).cwiseAbs().maxCoeff());
  }
  CheckResult result;
  result.name = "propagator_unitarity";
  result.passed = worst < 1e-10;
  result.detail = format_detail("worst |U^dag U - I| %.3e", worst);
  return result;
}

CheckResult check_power_properties() {
  std::mt19937_64 gen(17);
  bool in_range = true;
  double worst_orth = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 64;
    const SpectralBand band = make_band(n, n / 4);
    const Eigen::VectorXd h = random_vector(gen, n, 3.0);
    const double p = power_fraction(h, band);
    if (!(p >= 0.0 && p <= 1.0)) in_range = false;
    const double p_scaled = power_fraction(Eigen::VectorXd(2.5 * h), band);
    if (std::abs(p_scaled - p) > 1e-12) in_range = false;
    const Eigen::VectorXd grad = power_gradient(h, band);
    const double scale = grad.norm() * h.norm();
    if (scale > 0.0)
      worst_orth = std::max(worst_orth, std::abs(grad.dot(h)) / scale);
  }
  CheckResult result;
  result.name = "power_fraction_properties";
  result.passed = in_range && worst_orth < 1e-9;
  result.detail = format_detail("worst |<grad P, h>| / (|grad P||h|) %.3e", worst_orth);
  return result;
}

CheckResult check_sine_integral() {
  double worst = 0.0;
  const double probes[] = {0.0,  0.1,  0.5,   1.0,   2.0,   kPi,    5.0,   8.0,
                           12.0, 15.9, 16.0,  16.1,  20.0,  50.0,   100.0, 201.06,
                           1e3,  1e4,  0.001, 1e-8,  6.0,   7.85398};
  for (double x : probes) {
    for (double sign : {1.0, -1.0}) {
      const double diff =
          std::abs(sine_integral(sign * x) - sine_integral_quadrature(sign * x));
      worst = std::max(worst, diff);
    }
  }
  CheckResult result;
  result.name = "sine_integral_vs_quadrature";
  result.passed = worst < 1e-10;
  result.detail = format_detail("worst abs err %.3e", worst);
  return result;
}

CheckResult check_filtered_control() {
  std::mt19937_64 gen(23);
  double worst = 0.0;
  const int n = 8;
  const double dt = 0.2;
  const double omega0 = cutoff_from_band(n, n / 4, dt);
  for (int rep = 0; rep < 3; ++rep) {
    ControlSequence controls;
    controls.dt = dt;
    controls.hx = Eigen::VectorXd::Zero(n);
    controls.hy = Eigen::VectorXd::Zero(n);
    const int pulse = static_cast<int>(uniform01(gen) * n) % n;
    controls.hx[pulse] = uniform_pm(gen, 2.0);
    controls.hy[pulse] = uniform_pm(gen, 2.0);
    for (int probe = 0; probe < 20; ++probe) {
      const double t = uniform01(gen) * controls.duration();
      const FilteredPoint point = filtered_control(controls, omega0, t);
      const double oracle_x = lowpass_convolution_quadrature(controls.hx, dt, omega0, t);
      const double oracle_y = lowpass_convolution_quadrature(controls.hy, dt, omega0, t);
      worst = std::max(worst, std::abs(point.hx - oracle_x));
      worst = std::max(worst, std::abs(point.hy - oracle_y));
    }
  }
  CheckResult result;
  result.name = "filtered_control_vs_convolution";
  result.passed = worst < 1e-8;
  result.detail = format_detail("worst abs err %.3e", worst);
  return result;
}

}  // namespace

std::vector<CheckResult> run_all_checks() {
  return {check_objective_gradient(), check_parseval(),      check_unitarity(),
          check_power_properties(),   check_sine_integral(), check_filtered_control()};
}

}  // namespace specpulse::selftest

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

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace specpulse::selftest {

/// Oracles here are deliberately independent of the implementation paths
/// they check: quadrature instead of series/continued fractions, central
/// finite differences instead of analytic gradients, direct summation
/// instead of the production transform.

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

/// Si(x) by adaptive quadrature of sin(t)/t, accurate to ~1e-12.
double sine_integral_quadrature(double x);

/// Convolution of the piecewise-constant (hx only is irrelevant here; the
/// vector h holds one control direction) rectangle train with the ideal
/// low-pass kernel sin(w0 (t - s)) / (pi (t - s)), by adaptive quadrature.
double lowpass_convolution_quadrature(const Eigen::VectorXd& h, double dt, double omega0,
                                      double t);

/// Componentwise comparison of an analytic gradient against central finite
/// differences of f. Components with |analytic| < grad_floor are compared
/// with absolute tolerance abs_tol, everything else with relative tolerance
/// rel_tol. Returns the failing component count.
struct GradientCheck {
  int failed_components = 0;
  double worst_rel_error = 0.0;
  double worst_abs_error = 0.0;
};
GradientCheck finite_difference_check(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    const Eigen::VectorXd& analytic_gradient, double eps = 1e-6, double rel_tol = 1e-6,
    double grad_floor = 1e-10, double abs_tol = 1e-9);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The full property suite: objective gradient vs finite differences on 50
/// random small instances, Parseval, propagator unitarity, power-fraction
/// range and scale-invariance orthogonality, Si vs quadrature, and filtered
/// controls vs the convolution oracle. Deterministic, finishes well under a
/// minute.
std::vector<CheckResult> run_all_checks();

}  // namespace specpulse::selftest

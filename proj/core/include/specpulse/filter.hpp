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

#include "specpulse/dynamics.hpp"
#include "specpulse/spectral.hpp"

namespace specpulse {

/// Ideal low-pass filter passing angular frequencies |w| <= omega0, applied
/// to the piecewise-constant controls (taken as zero outside the control
/// window). `oversample` sub-slices per original slice approximate the
/// filtered, continuous controls when re-propagating.
struct FilterSpec {
  double omega0 = 0.0;
  int oversample = 16;
};

/// Si(x) = integral_0^x sin(t)/t dt. Odd, bounded, asymptote pi/2.
/// Absolute accuracy better than 1e-10 everywhere.
double sine_integral(double x);

/// Angular frequency of the lowest DFT index inside the penalized band,
/// omega0 = 2 pi (n/2 - delta) / (n dt). Rejects delta = n/2 (zero cutoff).
double cutoff_from_band(int signal_length, int half_width, double dt);

struct FilteredPoint {
  double hx = 0.0;
  double hy = 0.0;
};

/// Closed-form value of the low-pass-filtered controls at time t in
/// [0, n*dt]:
///   h_k(t) = (1/pi) sum_i h_{k,i} [Si(w0 (i dt - t)) - Si(w0 ((i-1) dt - t))],
/// i.e. the exact convolution of the rectangle train with sin(w0 s)/(pi s).
FilteredPoint filtered_control(const ControlSequence& controls, double omega0, double t);

/// Filtered controls sampled at the midpoints of n*oversample uniform
/// sub-slices, as a finer piecewise-constant sequence with dt/oversample
/// slices. Evaluation points lie on a regular lattice, so the Si values are
/// tabulated once and reused.
struct FilteredGrid {
  double sub_dt = 0.0;
  Eigen::VectorXd t;   // sub-slice midpoints
  Eigen::VectorXd hx;  // filtered values at t
  Eigen::VectorXd hy;
};

FilteredGrid sample_filtered_midpoints(const ControlSequence& controls,
                                       const FilterSpec& filter);

/// Gate fidelity achieved by the filtered controls: midpoint-sampled
/// sub-slices propagated with dt/oversample. Doubling the oversample factor
/// moves the result by < 1e-4 at the defaults.
double filtered_fidelity(const SpinChainSystem& sys, const ControlSequence& controls,
                         const TargetGate& target, const FilterSpec& filter);

}  // namespace specpulse

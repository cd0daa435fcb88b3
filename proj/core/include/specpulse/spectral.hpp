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
#include "specpulse/model.hpp"

namespace specpulse {

/// High-frequency band of a length-n spectrum: indices
/// n/2 - delta .. n/2 + delta, both ends inclusive. In the unitary DFT of a
/// real signal these are the components closest to the Nyquist index, i.e.
/// the highest absolute frequencies.
struct SpectralBand {
  int signal_length = 0;  // n, even
  int half_width = 0;     // delta

  int lo() const { return signal_length / 2 - half_width; }
  int hi() const { return signal_length / 2 + half_width; }
};

/// Validates n even, 0 <= delta <= n/2.
SpectralBand make_band(int signal_length, int half_width);

/// Unitary DFT with the positive-exponent convention,
/// y_k = n^{-1/2} sum_l exp(2 pi i k l / n) h_l. Parseval: |y|^2 = |h|^2.
Eigen::VectorXcd dft(const Eigen::VectorXd& h);

/// P = sum_{k in band} |y_k|^2 / |y|^2, in [0, 1]. A zero signal
/// (|h|^2 < 1e-300) is degenerate and yields P = 0 so the penalty never
/// forbids the zero pulse.
double power_fraction(const Eigen::VectorXd& h, const SpectralBand& band,
                      bool* degenerate = nullptr);

/// dP/dh_l = [ sum_{k in band} (2/sqrt(n)) Re(e^{-2 pi i k l / n} y_k)
///             - P * 2 h_l ] / |h|^2.
/// Zero vector for a degenerate (zero) signal.
Eigen::VectorXd power_gradient(const Eigen::VectorXd& h, const SpectralBand& band,
                               bool* degenerate = nullptr);

/// G = (1 - mu) * P_total - mu * F with P_total the mean of the per-direction
/// power fractions, so P_total stays in [0, 1] and x/y enter symmetrically.
struct ObjectiveSpec {
  double mu = 0.05;  // weight of the fidelity term, in [0, 1]
  SpectralBand band;
  SpinChainSystem system;
  TargetGate target;
  double dt = 0.2;
};

ObjectiveSpec make_objective_spec(double mu, SpectralBand band, SpinChainSystem system,
                                  TargetGate target, double dt);

struct ObjectiveValue {
  double value = 0.0;        // G
  Eigen::VectorXd gradient;  // length 2n: [dG/dhx ; dG/dhy]
  double fidelity = 0.0;     // NaN when mu == 0 (dynamics skipped)
  double power_x = 0.0;
  double power_y = 0.0;
  bool fidelity_singular = false;
};

/// Value and exact gradient of G. mu == 1 reduces to G = -F without touching
/// the spectrum; mu == 0 reduces to G = P_total without propagating.
ObjectiveValue objective(const ObjectiveSpec& spec, const ControlSequence& controls);

}  // namespace specpulse

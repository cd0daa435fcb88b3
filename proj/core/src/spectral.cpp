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

#include "specpulse/spectral.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace specpulse {

namespace {

using Complex = std::complex<double>;

constexpr double kDegenerateNorm = 1e-300;

// e^{2 pi i r / n} for r = 0..n-1; powers of the root of unity are read off
// by index (k*l mod n), keeping phases exact up to one rounding each.
std::vector<Complex> twiddle_table(int n) {
  std::vector<Complex> table(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    table[static_cast<std::size_t>(r)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
  return table;
}

void check_band(const Eigen::VectorXd& h, const SpectralBand& band) {
  if (static_cast<int>(h.size()) != band.signal_length)
    throw std::invalid_argument("spectral: signal length does not match band");
}

double band_power(const Eigen::VectorXcd& spectrum, const SpectralBand& band) {
  double sum = 0.0;
  for (int k = band.lo(); k <= band.hi(); ++k) sum += std::norm(spectrum[k]);
  return sum;
}

}  // namespace

SpectralBand make_band(int signal_length, int half_width) {
  if (signal_length < 2 || signal_length % 2 != 0)
    throw std::invalid_argument("make_band: signal length must be even and >= 2");
  if (half_width < 0 || half_width > signal_length / 2)
    throw std::invalid_argument("make_band: half-width must be in [0, n/2]");
  return SpectralBand{signal_length, half_width};
}

Eigen::VectorXcd dft(const Eigen::VectorXd& h) {
  const int n = static_cast<int>(h.size());
  if (n < 1) throw std::invalid_argument("dft: empty signal");
  const auto table = twiddle_table(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXcd y(n);
  for (int k = 0; k < n; ++k) {
    Complex sum = 0.0;
    const std::size_t step = static_cast<std::size_t>(k);
    std::size_t index = 0;
    for (int l = 0; l < n; ++l) {
      sum += table[index] * h[l];
      index += step;
      if (index >= static_cast<std::size_t>(n)) index -= static_cast<std::size_t>(n);
    }
    y[k] = scale * sum;
  }
  return y;
}

double power_fraction(const Eigen::VectorXd& h, const SpectralBand& band, bool* degenerate) {
  check_band(h, band);
  if (degenerate) *degenerate = false;
  const double signal_norm = h.squaredNorm();
  if (signal_norm < kDegenerateNorm) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  const Eigen::VectorXcd y = dft(h);
  return band_power(y, band) / y.squaredNorm();
}

Eigen::VectorXd power_gradient(const Eigen::VectorXd& h, const SpectralBand& band,
                               bool* degenerate) {
  check_band(h, band);
  if (degenerate) *degenerate = false;
  const int n = band.signal_length;
  const double signal_norm = h.squaredNorm();
  if (signal_norm < kDegenerateNorm) {
    if (degenerate) *degenerate = true;
    return Eigen::VectorXd::Zero(n);
  }

  const Eigen::VectorXcd y = dft(h);
  const double fraction = band_power(y, band) / y.squaredNorm();
  const auto table = twiddle_table(n);
  const double two_over_sqrt_n = 2.0 / std::sqrt(static_cast<double>(n));

  // d|y_k|^2 / dh_l = (2/sqrt(n)) Re(e^{-2 pi i k l / n} y_k), summed over
  // the band; quotient rule with d|y|^2/dh_l = 2 h_l (Parseval).
  Eigen::VectorXd gradient(n);
  for (int l = 0; l < n; ++l) {
    Complex band_sum = 0.0;
    for (int k = band.lo(); k <= band.hi(); ++k) {
      const std::size_t index = (static_cast<std::size_t>(k) * l) % n;
      band_sum += std::conj(table[index]) * y[k];
    }
    const double band_derivative = two_over_sqrt_n * band_sum.real();
    gradient[l] = (band_derivative - fraction * 2.0 * h[l]) / signal_norm;
  }
  return gradient;
}

ObjectiveSpec make_objective_spec(double mu, SpectralBand band, SpinChainSystem system,
                                  TargetGate target, double dt) {
  if (mu < 0.0 || mu > 1.0) throw std::invalid_argument("objective: mu must be in [0, 1]");
  if (!(dt > 0.0)) throw std::invalid_argument("objective: dt must be > 0");
  if (system.dim() != target.unitary.rows())
    throw std::invalid_argument("objective: system and target dimensions differ");
  return ObjectiveSpec{mu, band, std::move(system), std::move(target), dt};
}

ObjectiveValue objective(const ObjectiveSpec& spec, const ControlSequence& controls) {
  const int n = controls.slice_count();
  ObjectiveValue out;
  out.gradient = Eigen::VectorXd::Zero(2 * n);

  if (spec.mu > 0.0) {
    const PropagationResult propagation = propagate(spec.system, controls);
    out.fidelity = gate_fidelity(spec.target, propagation.total);
    const FidelityGradient fg =
        fidelity_gradient(spec.system, controls, spec.target, propagation);
    out.fidelity_singular = fg.singular;
    out.gradient.head(n) = -spec.mu * fg.wrt_hx;
    out.gradient.tail(n) = -spec.mu * fg.wrt_hy;
  } else {
    out.fidelity = std::numeric_limits<double>::quiet_NaN();
  }

  if (spec.mu < 1.0) {
    out.power_x = power_fraction(controls.hx, spec.band);
    out.power_y = power_fraction(controls.hy, spec.band);
    const double weight = 0.5 * (1.0 - spec.mu);
    out.gradient.head(n) += weight * power_gradient(controls.hx, spec.band);
    out.gradient.tail(n) += weight * power_gradient(controls.hy, spec.band);
  }

  const double power_total = 0.5 * (out.power_x + out.power_y);
  out.value = (1.0 - spec.mu) * power_total;
  if (spec.mu > 0.0) out.value -= spec.mu * out.fidelity;
  return out;
}

}  // namespace specpulse

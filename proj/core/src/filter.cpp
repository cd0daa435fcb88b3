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

#include "specpulse/filter.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace specpulse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCutoff = 16.0;

/// Maclaurin series sum_k (-1)^k x^(2k+1) / ((2k+1)(2k+1)!), in long double:
/// the terms peak near 5e4 at x = 16 and the extra mantissa bits absorb the
/// cancellation.
double sine_integral_series(double x) {
  const long double x2 = static_cast<long double>(x) * x;
  long double term = x;  // k = 0
  long double sum = term;
  for (int k = 1; k < 64; ++k) {
    const long double odd = 2.0L * k + 1.0L;
    term *= -x2 * (odd - 2.0L) / (odd * odd * (odd - 1.0L));
    sum += term;
    if (std::abs(term) < 1e-19L * (1.0L + std::abs(sum))) break;
  }
  return static_cast<double>(sum);
}

/// E1(i x) by the even continued fraction with modified Lentz iteration;
/// Si(x) = pi/2 + Im(E1(i x)) for x > 0. Converges fast for x above the
/// series cutoff.
double sine_integral_large(double x) {
  using C = std::complex<double>;
  const C z(0.0, x);
  C b = z + 1.0;
  C c = 1.0 / 1e-300;
  C d = 1.0 / b;
  C h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const C e1 = h * std::polar(1.0, -x);
  return kPi / 2.0 + e1.imag();
}

}  // namespace

double sine_integral(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("sine_integral: non-finite argument");
  const double magnitude = std::abs(x);
  const double value = magnitude <= kSeriesCutoff ? sine_integral_series(magnitude)
                                                  : sine_integral_large(magnitude);
  return std::signbit(x) ? -value : value;
}

double cutoff_from_band(int signal_length, int half_width, double dt) {
  const SpectralBand band = make_band(signal_length, half_width);
  if (!(dt > 0.0)) throw std::invalid_argument("cutoff_from_band: dt must be > 0");
  if (band.lo() == 0)
    throw std::invalid_argument("cutoff_from_band: delta = n/2 gives a zero cutoff");
  return 2.0 * kPi * static_cast<double>(band.lo()) /
         (static_cast<double>(signal_length) * dt);
}

FilteredPoint filtered_control(const ControlSequence& controls, double omega0, double t) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("filtered_control: omega0 must be > 0");
  const int n = controls.slice_count();
  const double duration = controls.duration();
  if (t < 0.0 || t > duration)
    throw std::invalid_argument("filtered_control: t outside the control window");

  FilteredPoint out;
  double si_prev = sine_integral(omega0 * (0.0 - t));
  for (int i = 1; i <= n; ++i) {
    const double si_cur = sine_integral(omega0 * (i * controls.dt - t));
    const double weight = (si_cur - si_prev) / kPi;
    out.hx += controls.hx[i - 1] * weight;
    out.hy += controls.hy[i - 1] * weight;
    si_prev = si_cur;
  }
  return out;
}

FilteredGrid sample_filtered_midpoints(const ControlSequence& controls,
                                       const FilterSpec& filter) {
  if (!(filter.omega0 > 0.0))
    throw std::invalid_argument("sample_filtered_midpoints: omega0 must be > 0");
  if (filter.oversample < 1)
    throw std::invalid_argument("sample_filtered_midpoints: oversample must be >= 1");
  const int n = controls.slice_count();
  const int os = filter.oversample;
  const int samples = n * os;
  const double sub_dt = controls.dt / os;

  // Every Si argument is omega0 * sub_dt * (q - 1/2) for integer
  // q = i*os - m, so one table of 2*n*os values covers the whole grid.
  const int q_min = -(samples - 1);
  const int q_max = samples;
  std::vector<double> si_table(static_cast<std::size_t>(q_max - q_min + 1));
  for (int q = q_min; q <= q_max; ++q)
    si_table[static_cast<std::size_t>(q - q_min)] =
        sine_integral(filter.omega0 * sub_dt * (q - 0.5));

  FilteredGrid grid;
  grid.sub_dt = sub_dt;
  grid.t.resize(samples);
  grid.hx.resize(samples);
  grid.hy.resize(samples);
  for (int m = 0; m < samples; ++m) {
    grid.t[m] = (m + 0.5) * sub_dt;
    double hx = 0.0;
    double hy = 0.0;
    const double* si = si_table.data() + (-m - q_min);  // si[i*os] for grid node i
    double si_prev = si[0];
    for (int i = 1; i <= n; ++i) {
      const double si_cur = si[i * os];
      const double weight = (si_cur - si_prev) / kPi;
      hx += controls.hx[i - 1] * weight;
      hy += controls.hy[i - 1] * weight;
      si_prev = si_cur;
    }
    grid.hx[m] = hx;
    grid.hy[m] = hy;
  }
  return grid;
}

double filtered_fidelity(const SpinChainSystem& sys, const ControlSequence& controls,
                         const TargetGate& target, const FilterSpec& filter) {
  const FilteredGrid grid = sample_filtered_midpoints(controls, filter);
  const ControlSequence fine{grid.sub_dt, grid.hx, grid.hy};
  return gate_fidelity(target, propagate_total(sys, fine));
}

}  // namespace specpulse

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

#include <vector>

#include "specpulse/model.hpp"

namespace specpulse {

/// Piecewise-constant control amplitudes. Slice i (1-based) occupies
/// [(i-1)*dt, i*dt]; total duration is n*dt.
struct ControlSequence {
  double dt = 0.0;
  Eigen::VectorXd hx;
  Eigen::VectorXd hy;

  int slice_count() const { return static_cast<int>(hx.size()); }
  double duration() const { return dt * static_cast<double>(hx.size()); }
};

/// Slice propagators and their ordered products. Slice 1 acts first:
/// total = U_n * ... * U_2 * U_1.
///
/// The eigendecomposition of each slice Hamiltonian is kept so the gradient
/// can reuse it instead of re-diagonalizing.
struct PropagationResult {
  std::vector<Matrix> slice_unitaries;        // U_i = exp(-i H_i dt)
  std::vector<Matrix> prefix_products;        // U_i * ... * U_1
  Matrix total;                               // U_n * ... * U_1
  std::vector<Matrix> slice_eigenvectors;     // V_i with H_i = V_i L_i V_i^dag
  std::vector<Eigen::VectorXd> slice_eigenvalues;
};

/// H_i = H0 + hx_i * Sx_1 + hy_i * Sy_1.
Matrix slice_hamiltonian(const SpinChainSystem& sys, double hx_i, double hy_i);

/// Exact piecewise-constant evolution; each slice propagator is formed from
/// the Hermitian eigendecomposition of its slice Hamiltonian.
PropagationResult propagate(const SpinChainSystem& sys, const ControlSequence& controls);

/// Total propagator only, without retaining per-slice data. Same slice
/// exponentials as propagate(); use for long oversampled sequences.
Matrix propagate_total(const SpinChainSystem& sys, const ControlSequence& controls);

/// F = |Tr(U_T^dag U)| / 2^N, in [0, 1], invariant under a global phase of U.
double gate_fidelity(const TargetGate& target, const Matrix& achieved);

/// Exact directional derivative d/ds exp(-i (H + s B) dt) at s = 0 for
/// Hermitian H and B, via the divided-difference (Daleckii-Krein) formula in
/// the eigenbasis of H. Stable across degenerate eigenvalue pairs.
Matrix exp_derivative(const Matrix& hamiltonian, const Matrix& direction, double dt);

struct FidelityGradient {
  Eigen::VectorXd wrt_hx;
  Eigen::VectorXd wrt_hy;
  /// Set when |Tr(U_T^dag U)| < 1e-14: |.| is non-differentiable at 0, so the
  /// gradient is reported as the zero subgradient and callers should restart.
  bool singular = false;
};

/// dF/dh_{k,i} for every slice and both control directions, using cached
/// prefix/suffix products: O(n) exponentials and O(n) matrix products total.
FidelityGradient fidelity_gradient(const SpinChainSystem& sys,
                                   const ControlSequence& controls,
                                   const TargetGate& target);

/// Same, reusing an existing propagation of `controls`.
FidelityGradient fidelity_gradient(const SpinChainSystem& sys,
                                   const ControlSequence& controls,
                                   const TargetGate& target,
                                   const PropagationResult& propagation);

}  // namespace specpulse

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

#include <Eigen/Dense>
#include <string>

namespace specpulse {

using Matrix = Eigen::MatrixXcd;

enum class PauliAxis { X, Y, Z };

/// Isotropic Heisenberg chain with Zeeman-like controls on the first spin.
///
/// Units: hbar = 1, energies in units of the coupling J, times in 1/J.
/// Spin operators are full Pauli matrices (not sigma/2); using the spin-1/2
/// convention instead would only rescale J and the control amplitudes.
struct SpinChainSystem {
  int num_qubits = 0;
  double coupling = 1.0;
  Matrix drift;      // nearest-neighbour Heisenberg term, 2^N x 2^N
  Matrix control_x;  // sigma_x on the first spin
  Matrix control_y;  // sigma_y on the first spin

  Eigen::Index dim() const { return drift.rows(); }
};

/// Unitary to synthesize, 2^N x 2^N.
struct TargetGate {
  int num_qubits = 0;
  std::string name;  // "not", "swap", or a caller-supplied label
  Matrix unitary;
};

/// sigma_axis on `site`, identity elsewhere. Site 1 is the leftmost
/// (most significant) tensor factor: I^(site-1) (x) sigma (x) I^(N-site).
Matrix pauli_embed(PauliAxis axis, int site, int num_qubits);

/// H0 = J * sum_i (Sx_i Sx_{i+1} + Sy_i Sy_{i+1} + Sz_i Sz_{i+1}) over
/// adjacent pairs. The zero matrix for a single spin.
Matrix build_drift(int num_qubits, double coupling);

SpinChainSystem make_spin_chain(int num_qubits, double coupling = 1.0);

/// NOT_N: negation of the last qubit, I^(N-1) (x) sigma_x.
TargetGate target_not(int num_qubits);

/// SWAP_N: exchange of the last two qubits, I^(N-2) (x) SWAP. Requires N >= 2.
TargetGate target_swap(int num_qubits);

}  // namespace specpulse

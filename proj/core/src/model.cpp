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

#include "specpulse/model.hpp"

#include <complex>
#include <stdexcept>

namespace specpulse {

namespace {

using Complex = std::complex<double>;

Matrix pauli_matrix(PauliAxis axis) {
  Matrix sigma(2, 2);
  switch (axis) {
    case PauliAxis::X:
      sigma << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      sigma << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case PauliAxis::Z:
      sigma << 1, 0, 0, -1;
      break;
  }
  return sigma;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Matrix pauli_embed(PauliAxis axis, int site, int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("pauli_embed: num_qubits must be >= 1");
  if (site < 1 || site > num_qubits)
    throw std::invalid_argument("pauli_embed: site " + std::to_string(site) +
                                " out of range 1.." + std::to_string(num_qubits));
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 1; q <= num_qubits; ++q) {
    out = (q == site) ? kron(out, pauli_matrix(axis))
                      : kron(out, Matrix::Identity(2, 2));
  }
  return out;
}

Matrix build_drift(int num_qubits, double coupling) {
  if (num_qubits < 1) throw std::invalid_argument("build_drift: num_qubits must be >= 1");
  const Eigen::Index dim = Eigen::Index(1) << num_qubits;
  Matrix drift = Matrix::Zero(dim, dim);
  for (int site = 1; site < num_qubits; ++site) {
    for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
      drift += pauli_embed(axis, site, num_qubits) * pauli_embed(axis, site + 1, num_qubits);
    }
  }
  return coupling * drift;
}

SpinChainSystem make_spin_chain(int num_qubits, double coupling) {
  SpinChainSystem sys;
  sys.num_qubits = num_qubits;
  sys.coupling = coupling;
  sys.drift = build_drift(num_qubits, coupling);
  sys.control_x = pauli_embed(PauliAxis::X, 1, num_qubits);
  sys.control_y = pauli_embed(PauliAxis::Y, 1, num_qubits);
  return sys;
}

TargetGate target_not(int num_qubits) {
  return TargetGate{num_qubits, "not", pauli_embed(PauliAxis::X, num_qubits, num_qubits)};
}

TargetGate target_swap(int num_qubits) {
  if (num_qubits < 2) throw std::invalid_argument("target_swap: requires num_qubits >= 2");
  Matrix swap(4, 4);
  swap << 1, 0, 0, 0,
          0, 0, 1, 0,
          0, 1, 0, 0,
          0, 0, 0, 1;
  const Eigen::Index rest = Eigen::Index(1) << (num_qubits - 2);
  Matrix out = Matrix::Zero(rest * 4, rest * 4);
  for (Eigen::Index b = 0; b < rest; ++b) out.block(b * 4, b * 4, 4, 4) = swap;
  return TargetGate{num_qubits, "swap", out};
}

}  // namespace specpulse

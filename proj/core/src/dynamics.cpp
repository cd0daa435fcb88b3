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

#include "specpulse/dynamics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace specpulse {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

/// Gamma_pq = (e^{-i l_p dt} - e^{-i l_q dt}) / (-i (l_p - l_q) dt)
///          = e^{-i (l_p + l_q) dt / 2} * sinc((l_p - l_q) dt / 2),
/// with the diagonal limit e^{-i l_p dt} reached continuously.
Matrix divided_difference_table(const Eigen::VectorXd& eigenvalues, double dt) {
  const Eigen::Index d = eigenvalues.size();
  Matrix gamma(d, d);
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = 0; q < d; ++q) {
      const double mean = 0.5 * (eigenvalues[p] + eigenvalues[q]) * dt;
      const double half_gap = 0.5 * (eigenvalues[p] - eigenvalues[q]) * dt;
      gamma(p, q) = std::polar(sinc(half_gap), -mean);
    }
  }
  return gamma;
}

void check_finite(const ControlSequence& controls) {
  if (controls.slice_count() < 1)
    throw std::invalid_argument("ControlSequence: needs at least one slice");
  if (controls.hy.size() != controls.hx.size())
    throw std::invalid_argument("ControlSequence: hx and hy lengths differ");
  if (!(controls.dt > 0.0)) throw std::invalid_argument("ControlSequence: dt must be > 0");
  if (!controls.hx.allFinite() || !controls.hy.allFinite())
    throw std::invalid_argument("ControlSequence: non-finite control amplitude");
}

}  // namespace

Matrix slice_hamiltonian(const SpinChainSystem& sys, double hx_i, double hy_i) {
  return sys.drift + hx_i * sys.control_x + hy_i * sys.control_y;
}

PropagationResult propagate(const SpinChainSystem& sys, const ControlSequence& controls) {
  check_finite(controls);
  const int n = controls.slice_count();
  const Eigen::Index d = sys.dim();

  PropagationResult result;
  result.slice_unitaries.reserve(n);
  result.prefix_products.reserve(n);
  result.slice_eigenvectors.reserve(n);
  result.slice_eigenvalues.reserve(n);

  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  Matrix hamiltonian(d, d);
  Eigen::VectorXcd phases(d);
  for (int i = 0; i < n; ++i) {
    hamiltonian = slice_hamiltonian(sys, controls.hx[i], controls.hy[i]);
    solver.compute(hamiltonian);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("propagate: eigendecomposition failed at slice " +
                               std::to_string(i + 1));
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const Matrix& basis = solver.eigenvectors();
    for (Eigen::Index p = 0; p < d; ++p)
      phases[p] = std::polar(1.0, -lambda[p] * controls.dt);
    Matrix unitary = basis * phases.asDiagonal() * basis.adjoint();

    result.prefix_products.push_back(
        i == 0 ? unitary : Matrix(unitary * result.prefix_products.back()));
    result.slice_unitaries.push_back(std::move(unitary));
    result.slice_eigenvectors.push_back(basis);
    result.slice_eigenvalues.push_back(lambda);
  }
  result.total = result.prefix_products.back();
  return result;
}

Matrix propagate_total(const SpinChainSystem& sys, const ControlSequence& controls) {
  check_finite(controls);
  const int n = controls.slice_count();
  const Eigen::Index d = sys.dim();

  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  Matrix hamiltonian(d, d);
  Eigen::VectorXcd phases(d);
  Matrix total = Matrix::Identity(d, d);
  for (int i = 0; i < n; ++i) {
    hamiltonian = slice_hamiltonian(sys, controls.hx[i], controls.hy[i]);
    solver.compute(hamiltonian);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("propagate_total: eigendecomposition failed at slice " +
                               std::to_string(i + 1));
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const Matrix& basis = solver.eigenvectors();
    for (Eigen::Index p = 0; p < d; ++p)
      phases[p] = std::polar(1.0, -lambda[p] * controls.dt);
    total = basis * phases.asDiagonal() * basis.adjoint() * total;
  }
  return total;
}

double gate_fidelity(const TargetGate& target, const Matrix& achieved) {
  if (target.unitary.rows() != achieved.rows() || target.unitary.cols() != achieved.cols())
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  const Complex overlap = (target.unitary.adjoint() * achieved).trace();
  return std::abs(overlap) / static_cast<double>(target.unitary.rows());
}

Matrix exp_derivative(const Matrix& hamiltonian, const Matrix& direction, double dt) {
  if (hamiltonian.rows() != direction.rows() || hamiltonian.cols() != direction.cols())
    throw std::invalid_argument("exp_derivative: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("exp_derivative: eigendecomposition failed");
  const Matrix& basis = solver.eigenvectors();
  const Matrix gamma = divided_difference_table(solver.eigenvalues(), dt);
  const Matrix direction_eig = basis.adjoint() * (-kImag * dt * direction) * basis;
  return basis * direction_eig.cwiseProduct(gamma) * basis.adjoint();
}

FidelityGradient fidelity_gradient(const SpinChainSystem& sys,
                                   const ControlSequence& controls,
                                   const TargetGate& target) {
  return fidelity_gradient(sys, controls, target, propagate(sys, controls));
}

FidelityGradient fidelity_gradient(const SpinChainSystem& sys,
                                   const ControlSequence& controls,
                                   const TargetGate& target,
                                   const PropagationResult& propagation) {
  const int n = controls.slice_count();
  const Eigen::Index d = sys.dim();
  const double dim = static_cast<double>(d);

  FidelityGradient grad;
  grad.wrt_hx = Eigen::VectorXd::Zero(n);
  grad.wrt_hy = Eigen::VectorXd::Zero(n);

  const Complex overlap = (target.unitary.adjoint() * propagation.total).trace();
  if (std::abs(overlap) < 1e-14) {
    // |Tr| is non-differentiable at zero; zero subgradient, caller restarts.
    grad.singular = true;
    return grad;
  }
  const Complex overlap_scale = std::conj(overlap) / std::abs(overlap) / dim;

  // dTr/dh_{k,i} = Tr(suffix_i D_{k,i} prefix_{i-1}) with
  // suffix_i = U_T^dag U_n ... U_{i+1} and prefix_{i-1} = U_{i-1} ... U_1;
  // walking i downward updates the suffix with one product per slice.
  Matrix suffix = target.unitary.adjoint();
  Matrix ring(d, d), ring_eig(d, d), ctrl_eig(d, d);
  for (int i = n - 1; i >= 0; --i) {
    const Matrix& basis = propagation.slice_eigenvectors[i];
    const Eigen::VectorXd& lambda = propagation.slice_eigenvalues[i];

    // Tr(suffix D prefix) = Tr((prefix * suffix) D); in the slice eigenbasis
    // the derivative D contracts elementwise with the divided differences.
    if (i == 0) {
      ring = suffix;
    } else {
      ring = propagation.prefix_products[i - 1] * suffix;
    }
    ring_eig = basis.adjoint() * ring * basis;
    const Matrix gamma = divided_difference_table(lambda, controls.dt);

    for (int direction = 0; direction < 2; ++direction) {
      const Matrix& generator = direction == 0 ? sys.control_x : sys.control_y;
      ctrl_eig = basis.adjoint() * generator * basis;
      const Complex trace_derivative =
          -kImag * controls.dt *
          ring_eig.transpose().cwiseProduct(ctrl_eig.cwiseProduct(gamma)).sum();
      const double value = (overlap_scale * trace_derivative).real();
      (direction == 0 ? grad.wrt_hx : grad.wrt_hy)[i] = value;
    }

    suffix = suffix * propagation.slice_unitaries[i];
  }
  return grad;
}

}  // namespace specpulse

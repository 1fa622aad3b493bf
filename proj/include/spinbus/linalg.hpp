// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

// Dense helpers shared by the gate and protocol modules.

#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <random>

namespace spinbus {

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& m);

/// min over phi of ||u - e^{i phi} v||_2 for unitary u, v.
double phase_aligned_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

/// |Tr(u^dagger v)|^2 / d^2; 1 iff equal up to global phase (for unitaries).
double gate_fidelity(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

/// Nearest unitary in Frobenius norm (polar factor).
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m);

/// max |(u^dagger u - 1)_{ij}|
double unitarity_defect(const Eigen::MatrixXcd& u);

/// exp(-i H t) for a real symmetric H, by eigendecomposition.
Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXd& H, double t);

/// Haar-random normalized state of dimension `dim`.
Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng);

/// Tensor product of single-qubit states (first factor = lowest bit).
Eigen::VectorXcd random_product_state(int n_qubits, std::mt19937_64& rng);

/// Deterministic 64-bit stream derivation for reproducible parallel runs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace spinbus

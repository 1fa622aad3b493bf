// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Eigensolvers, the bus ground doublet, and scaling fits.
 *
 * For odd N at zero field the chain ground state is a spin-1/2 doublet.
 * Every multiplet of an odd chain has an S_z = +1/2 member, so the doublet
 * energy and the first excitation are the two lowest levels of that sector.
 */

#pragma once

#include "spinbus/hamiltonian.hpp"
#include "spinbus/statevector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace spinbus {

inline constexpr std::size_t kDenseCutoff = 4096;

/// meV per mK.
inline constexpr double kBoltzmannMeVPerMilliKelvin = 8.617e-5;

struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;   ///< ascending
    Eigen::MatrixXd eigenvectors;  ///< orthonormal columns
};

EigenDecomposition eig_dense(const SparseHamiltonian& H, std::size_t cutoff = kDenseCutoff);

struct LanczosOptions {
    double tol = 1e-10;       ///< absolute residual ||Hv - lambda v|| per pair
    int max_iter = 20000;     ///< mat-vec budget per eigenpair
    int krylov_dim = 48;      ///< restart length
    std::uint64_t seed = 12345;
};

/// k lowest eigenpairs by restarted Lanczos with full reorthogonalization.
/// Converged pairs are locked and deflated, so degenerate levels are resolved.
/// Throws ConvergenceError with the best residual seen if the budget runs out.
EigenDecomposition eig_lowest(const SparseHamiltonian& H, int k, const LanczosOptions& opts = {});

/// Dense when dim <= cutoff, Lanczos otherwise.
EigenDecomposition eig_lowest_auto(const SparseHamiltonian& H, int k, const LanczosOptions& opts = {},
                                   std::size_t cutoff = kDenseCutoff);

struct BusManifold {
    int N = 0;
    double J_b = 0.0;
    double ground_energy = 0.0;
    double gap = 0.0;          ///< +inf for N = 1
    Statevector state0;        ///< |0>_b, S_z = -1/2, equal to S^- |1>_b
    Statevector state1;        ///< |1>_b, S_z = +1/2, largest amplitude positive
    std::vector<double> j_eff; ///< J_i* / J_i for nodes 1..N
};

/// Ground doublet of an odd open chain at zero field.
BusManifold bus_manifold(const ChainSpec& spec, const LanczosOptions& opts = {});

/// Unweighted mean of j_eff over odd (antiferromagnetic) nodes.
double mean_odd_node_coupling(const BusManifold& bus);

/// J_b pi^2 / 2N.
double gap_formula(int N, double J_b);

struct PowerLawFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    double residual = 0.0;         ///< RMS of log residuals
    double exponent_stderr = 0.0;  ///< 0 when fewer than three points
};

/// Least squares of log y on log x.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

/// Largest N with J_b/J_q > 4 sqrt(N) / pi^2.
long adiabatic_bus_bound(double ratio);

/// Gap J_b pi^2 / 2N expressed as a temperature in mK for J_b in meV.
double gap_physical(double J_b_meV, int N);

}  // namespace spinbus

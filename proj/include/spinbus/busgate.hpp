// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file busgate.hpp
 * @brief Star model H_n = J* sum_i s_i . S and its multiqubit bus gates.
 *
 * Layout: bus spin = bit 0, qubit k = bit k+1, so a state index is b + 2 q.
 * At the decoupling time every 2x2 block {|0>|j,l,m+1>, |1>|j,l,m>} is
 * diagonal and U(tau) = 1_b (x) U_n with U_n = diag(exp(-i j J* tau / 2)).
 */

#pragma once

#include "spinbus/hamiltonian.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace spinbus {

struct StarModel {
    int n = 1;
    double J_star = 1.0;

    void validate() const;
    std::size_t dim() const { return std::size_t{2} << n; }
};

SparseHamiltonian star_hamiltonian(const StarModel& model);

/// 2 pi / J* (odd n), 4 pi / J* (even n), 4 pi / (3 J*) for n = 2.
double decoupling_time(int n, double J_star);

/// J* (n + 1) / 2, the analytic width of the star spectrum.
double spectrum_width_formula(const StarModel& model);

/// Max minus min eigenvalue of the dense star Hamiltonian.
double spectrum_width(const StarModel& model);

struct BusGateReport {
    double tau = 0.0;
    Eigen::MatrixXcd U_full;   ///< U(tau) on bus (x) qubits
    Eigen::MatrixXcd U_n;      ///< qubit-space gate
    double residual = 0.0;     ///< ||U(tau) - 1_b (x) U_n||_2
    double bus_block_mismatch = 0.0;  ///< ||B_00 - B_11||_2 before averaging
    std::map<int, cplx> phases;       ///< two_j -> diagonal phase in the angular basis
    double phase_spread = 0.0;        ///< max deviation of a diagonal entry from its j phase
    double angular_off_diagonal = 0.0;
    bool is_identity = false;         ///< ||U_n - 1||_max < 1e-10
};

/// Gate at the decoupling time; throws ClaimViolation if residual > 1e-8.
BusGateReport bus_gate(const StarModel& model);

/// Same analysis at an arbitrary time, without the residual check.
BusGateReport bus_gate_at(const StarModel& model, double tau);

/// Max |<a|U(tau)|b>| over block_map basis pairs (a, b) in different blocks.
double off_block_magnitude(const StarModel& model, double tau);

struct TimingError {
    double epsilon = 0.0;  ///< ||U(tau (1+delta)) - U(tau)||_2
    double bound = 0.0;    ///< (pi/2)(n+2)|delta|
    double ratio = 0.0;    ///< epsilon / bound (0 when delta = 0)
};

TimingError timing_error(const StarModel& model, double delta);

/// Worst 1 - f over `trials` random product and entangled states; throws
/// ClaimViolation when it exceeds (pi^2/2)(n+1)^2 delta^2.
double timing_fidelity_check(const StarModel& model, double delta, int trials, std::uint64_t seed = 2024);

double timing_fidelity_bound(int n, double delta);

/// floor((pi^2 ratio / sqrt 2)^(2/3)).
int max_gate_size(double ratio);

struct MicroscopicGateReport {
    double J_star = 0.0;              ///< first-order coupling J_q min |j_eff|
    double J_star_exact = 0.0;        ///< from the width of the lowest 2^(n+1) levels
    double tau = 0.0;                 ///< decoupling time for J_star_exact
    std::vector<double> bare;         ///< bare couplings that equalize J_i*
    Eigen::MatrixXcd projected;       ///< U(tau) restricted to manifold (x) qubits, index b + 2q
    double infidelity = 0.0;          ///< 1 - |Tr(P^dagger (1 (x) U_n))|^2 / d^2
    double leakage = 0.0;             ///< worst population lost from the manifold
};

/// Couples one qubit to each listed odd node of a real chain, with bare
/// couplings scaled so every J_i* equals J_q times the smallest |j_eff|.
/// The renormalized J* is read off the low-energy spectrum, whose width is
/// (n+1)J*/2 in the star model, and the system evolves for its decoupling time.
MicroscopicGateReport microscopic_bus_gate(const ChainSpec& chain, std::span<const int> nodes, double J_q);

}  // namespace spinbus

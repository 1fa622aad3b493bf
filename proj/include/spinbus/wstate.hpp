// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file wstate.hpp
 * @brief Heralded W-state preparation with multiqubit bus gates.
 *
 * Qubit k is bit k.  Data qubits take the lowest indices, sacrificial
 * qubits follow.  Measurement is exact projection on amplitudes.
 */

#pragma once

#include "spinbus/hamiltonian.hpp"
#include "spinbus/statevector.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace spinbus {

/// (|0..01> + |0..10> + ... + |10..0>) / sqrt(n) on n qubits.
Statevector w_state(int n);

struct MeasurementOutcome {
    double probability = 0.0;
    Statevector post_state;  ///< on the unmeasured qubits, in ascending qubit order
};

/// Projects `qubits` onto `outcome_bits`.  Throws std::domain_error
/// ("outcome unreachable") when the probability is below 1e-14.
MeasurementOutcome measure(const Statevector& state, std::span<const int> qubits, std::span<const int> outcome_bits);

enum class Protocol { one, two };

struct ProtocolResult {
    int n = 0;
    double p_success = 0.0;
    Statevector post_state;
    double fidelity = 0.0;
    double predicted_p = 0.0;
    bool bus_gate = true;        ///< false when no nontrivial uniform bus gate exists (see qubit_gate)
    Statevector gate_output;     ///< register state right before measurement
};

/// Qubit-space gate on m qubits used by the protocols.  For odd m this is the
/// star-model bus gate U_m at its decoupling time.  For even m the only
/// decoupled uniform gate is the identity, so the same total-spin parity
/// reflection sum_j (-1)^(m/2 - j) P_j that U_m realizes for odd m is built
/// directly from the angular basis instead.
Eigen::MatrixXcd qubit_gate(int m, bool* from_bus = nullptr);

/// sum_j (-1)^(m/2 - j) P_j on m qubits.
Eigen::MatrixXcd spin_parity_reflection(int m);

/// Gate U_{n+1} on |0..0>_d |1>_s, keep sacrificial outcome 0.
ProtocolResult protocol_one(int n_data);

/// Gate U_{2n-1} on |1..1>_d |0..0>_s, keep all-ones on the n-1 sacrificial qubits.
ProtocolResult protocol_two(int n);

/// 4n/(n+1)^2 or n [(2n-2)!!/(2n-1)!!]^2, the latter as a running product of (2k/(2k+1))^2.
double closed_form_p(Protocol protocol, int n);

/// Probabilities of every sacrificial outcome of protocol two (index = outcome bits).
std::vector<double> protocol_two_outcome_distribution(int n);

/// Runs protocol one with the bus tracked explicitly through the star-model
/// propagator; returns ||rho_bus - |b><b| ||_max after the gate.
double protocol_one_bus_disturbance(int n_data, int bus_state);

/// Protocol one on a real chain: the n_data + 1 qubits sit on `nodes`.
/// Success probability and fidelity come from the manifold-projected evolution.
ProtocolResult protocol_one_microscopic(int n_data, const ChainSpec& chain, std::span<const int> nodes, double J_q);

/// Repeat-until-success demonstration: number of attempts until a sampled success.
int sample_attempts(Protocol protocol, int n, std::mt19937_64& rng, int max_attempts = 1000);

}  // namespace spinbus

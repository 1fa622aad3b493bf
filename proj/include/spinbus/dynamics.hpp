// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dynamics.hpp
 * @brief Time evolution, exchange gates, and the serial bus protocol.
 *
 * Heisenberg evolution exp(-i J t s.s) gives SWAP at J t = pi and root-SWAP
 * at J t = pi/2, each up to a global phase.  Gate comparisons therefore go
 * through phase_aligned_distance or gate_fidelity.
 */

#pragma once

#include "spinbus/hamiltonian.hpp"
#include "spinbus/spectral.hpp"
#include "spinbus/statevector.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace spinbus {

class UnitaryMatrix {
public:
    /// Throws std::invalid_argument if ||U^dagger U - 1||_max exceeds `tolerance`.
    explicit UnitaryMatrix(Eigen::MatrixXcd m, double tolerance = 1e-10);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
    bool is_permutation(double tol = 1e-10) const;

private:
    Eigen::MatrixXcd m_;
};

struct EvolveOptions {
    std::size_t dense_cutoff = kDenseCutoff;
    int krylov_dim = 30;
    double tol = 1e-10;  ///< total error budget of the Krylov path
};

/// exp(-i H t) psi.  Spectral for dim <= dense_cutoff, adaptive Lanczos-Krylov otherwise.
Statevector evolve(const SparseHamiltonian& H, const Statevector& psi, double t,
                   const EvolveOptions& opts = {});

UnitaryMatrix propagator(const SparseHamiltonian& H, double t);

enum class SwapKind { full, root };

/// pi/|J| for SWAP, pi/(2|J|) for root-SWAP.
double swap_time(double J_eff, SwapKind kind);

/// (1 - i SWAP)/sqrt(2) on two qubits, index = q0 + 2 q1.
Eigen::Matrix4cd ideal_root_swap();

/// Left-multiplies `m` (rows indexed by `basis`) by exp(-i theta s_a.s_b).
void apply_exchange_gate(const SpinBasis& basis, int a, int b, double theta, Eigen::MatrixXcd& m);

/// Site pairs of the end-to-end exchange S12 S23 ... S_{n-1,n} ... S23 S12 in
/// application order (2n-3 gates).
std::vector<std::array<int, 2>> chain_swap_sequence(int n_qubits);

/// Product of the 2n-3 nearest-neighbour SWAPs.  Gate k runs for pi/J_nominal
/// with actual coupling couplings[k]; each gate carries the phase e^{i pi/4}
/// so that nominal couplings give an exact permutation matrix.
UnitaryMatrix chain_swap_unitary(int n_qubits, std::span<const double> couplings, double J_nominal = 1.0);

/// Same product restricted to one basis (e.g. an S_z sector); not necessarily unitary-checked.
Eigen::MatrixXcd chain_swap_block(const SpinBasis& basis, std::span<const double> couplings,
                                  double J_nominal = 1.0);

/// Columns |b>_bus (x) |q> embedded in `full` (bus sites first, then
/// `n_qubits` qubit sites); column index b + 2 q.
Eigen::MatrixXcd manifold_embedding(const BusManifold& bus, const SpinBasis& full, int n_qubits);

enum class BusModel { microscopic, effective };

struct SerialConfig {
    ChainSpec chain;
    int source_node = 1;
    int target_node = 1;
    double J_q = 0.05;
    BusModel model = BusModel::microscopic;
};

struct SerialResult {
    Statevector final_state;
    double leakage = 0.0;   ///< population outside bus manifold (x) qubits
    double elapsed = 0.0;
    double fidelity = 0.0;  ///< |<ideal|final>|^2, ideal = |b> (x) rootSWAP|q>
};

/// SWAP source->bus, root-SWAP bus<->target, SWAP bus->source, timed by the
/// exact per-node J_i* of `bus`.  `qubit_state` is indexed q_source + 2 q_target;
/// `bus_state` selects |0>_b or |1>_b.
SerialResult serial_protocol(const SerialConfig& cfg, const BusManifold& bus,
                             const Eigen::Vector4cd& qubit_state, int bus_state);

/// Same, computing the bus manifold first.
SerialResult serial_protocol(const SerialConfig& cfg, const Eigen::Vector4cd& qubit_state, int bus_state);

/// Effective qubit-space gate <b| U_protocol |b> (4x4) for bus state b.
Eigen::Matrix4cd serial_qubit_gate(const SerialConfig& cfg, const BusManifold& bus, int bus_state);

struct SerialSample {
    double t;
    double fidelity;
    double leakage;
};

/// (t, overlap with final ideal state, leakage) along the protocol.
std::vector<SerialSample> serial_time_series(const SerialConfig& cfg, const BusManifold& bus,
                                             const Eigen::Vector4cd& qubit_state, int bus_state,
                                             int samples_per_stage);

/// 8x8 propagator of the effective three-spin serial protocol (bus = bit 0,
/// source = bit 1, target = bit 2).  Gate durations use the nominal effective
/// couplings; `actual` holds the couplings really applied in each stage.
Eigen::MatrixXcd effective_serial_unitary(double J_source, double J_target, const std::array<double, 3>& actual);

struct ProtocolTimes {
    double t_chain = 0.0;  ///< N pi / J_q
    double t_bus = 0.0;    ///< 3 pi sqrt(2N - 1) / J_q
    int crossover_N = 0;   ///< smallest N >= 2 where the bus is faster
};

ProtocolTimes protocol_time_compare(int N, double J_q);

}  // namespace spinbus

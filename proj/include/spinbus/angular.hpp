// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file angular.hpp
 * @brief Clebsch-Gordan coefficients and the total-spin basis of n qubits.
 *
 * Angular momenta are carried as twice their value (`two_j`), so spin-1/2
 * is 1 and all arithmetic stays in integers.  The degeneracy label lambda
 * counts sequential coupling paths (qubit 1 + 2, then + 3, ...) in
 * lexicographic order of the intermediate spins.
 */

#pragma once

#include <Eigen/Core>

#include <vector>

namespace spinbus {

/// Twice an angular momentum value; rejects anything that is not a half-integer.
int twice(double j);

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley phase convention.
/// Returns 0 for forbidden combinations; throws std::invalid_argument for
/// non-half-integer arguments.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);
double clebsch_gordan_2j(int tj1, int tm1, int tj2, int tm2, int tJ, int tM);

struct AngularBasisElement {
    int two_j = 0;
    int two_m = 0;
    int lambda = 0;
    std::vector<int> path;   ///< two_j after coupling 1, 2, ..., n qubits
    Eigen::VectorXd vector;  ///< in the 2^n computational basis, qubit k = bit k

    double j() const { return 0.5 * two_j; }
    double m() const { return 0.5 * two_m; }
};

/// Complete orthonormal total-spin basis, ordered by (j, lambda, m).
std::vector<AngularBasisElement> total_spin_basis(int n);

/// Number of spin-j multiplets in n spin-1/2: C(n, n/2-j) - C(n, n/2-j-1).
long multiplicity(int n, int two_j);

struct Block {
    std::vector<Eigen::VectorXd> states;  ///< one (1x1) or two (2x2) vectors on bus (x) qubits
    int two_j = 0;
    int lambda = 0;
    int two_m = 0;  ///< qubit m of the |1>_b member (the |0>_b member has m+1)
};

/// Partition of the (n+1)-spin space (bus = bit 0, qubit k = bit k+1) into
/// the 2x2 pairs {|0>|j,l,m+1>, |1>|j,l,m>} and the 1x1 stretched states
/// |1>|j,l,j>, |0>|j,l,-j> left invariant by the star Hamiltonian.
struct BlockMap {
    int n = 0;
    std::vector<Block> blocks;

    /// All block vectors as columns, in block order.
    Eigen::MatrixXd basis_matrix() const;
};

BlockMap block_map(int n);

/// Bus (x) qubit vector: bus = bit 0.
Eigen::VectorXd with_bus(int bus_state, const Eigen::VectorXd& qubits);

}  // namespace spinbus

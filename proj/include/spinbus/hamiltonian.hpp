// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Real symmetric sparse operators for isotropic exchange models.
 *
 * Sites 0..N-1 are the bus chain (site index = node - 1); external qubits
 * follow at bit positions N, N+1, ... in coupling-list order.  Every operator
 * built here conserves total S_z, so it maps a sector basis into itself.
 */

#pragma once

#include "spinbus/basis.hpp"
#include "spinbus/statevector.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstddef>
#include <span>
#include <vector>

namespace spinbus {

struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Coalesced, row-major sorted triplets plus a CSR view for mat-vec.
class SparseHamiltonian {
public:
    SparseHamiltonian() = default;
    /// Duplicates are summed; exact zeros are dropped.
    SparseHamiltonian(std::size_t dim, std::vector<Entry> triplets);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const Entry> entries() const noexcept { return entries_; }
    std::size_t nnz() const noexcept { return entries_.size(); }

    /// Largest |row sum| bound on the spectral radius.
    double norm_bound() const;

    Eigen::MatrixXd to_dense() const;
    Eigen::SparseMatrix<double, Eigen::RowMajor> to_eigen() const;

    void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
    void multiply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

    SparseHamiltonian operator+(const SparseHamiltonian& other) const;
    SparseHamiltonian scaled(double factor) const;

private:
    std::size_t dim_ = 0;
    std::vector<Entry> entries_;
    std::vector<std::size_t> row_ptr_;
};

struct ChainSpec {
    int N = 1;
    double J_b = 1.0;
    /// Optional per-bond couplings (size N-1); overrides J_b when non-empty.
    std::vector<double> bond_J;
    double B = 0.0;

    double bond(int i) const { return bond_J.empty() ? J_b : bond_J.at(static_cast<std::size_t>(i)); }
    /// Throws std::invalid_argument unless N is odd and positive and all bonds > 0.
    void validate() const;
};

struct Interval {
    double start = 0.0;
    double end = 0.0;
};

struct QubitCoupling {
    int node = 1;          ///< 1-based bus site
    double J = 0.0;
    /// Half-open [start, end) intervals when the coupling is on.  An empty
    /// schedule means the coupling is always on.
    std::vector<Interval> schedule;

    bool active(double t) const;
    void validate(int bus_size) const;
};

/// sum_k J_k s_{a_k} . s_{b_k} on arbitrary site pairs.
struct ExchangeTerm {
    int a = 0;
    int b = 0;
    double J = 0.0;
};

SparseHamiltonian exchange_operator(const SpinBasis& basis, std::span<const ExchangeTerm> terms,
                                    double field = 0.0);

/// J_b sum s_i.s_{i+1} over the open chain plus B sum s_iz over every site of
/// `basis`.  Sites beyond N are external qubits and only see the field.
SparseHamiltonian heisenberg_hamiltonian(const ChainSpec& spec, const SpinBasis& basis);

/// H + sum over active couplings of J_i s_i^q . s_node^b at time t.
SparseHamiltonian couple_qubits(const SparseHamiltonian& H, const SpinBasis& basis, int bus_size,
                                std::span<const QubitCoupling> couplings, double t);

/// Diagonal operator s_z on one site.
SparseHamiltonian sz_operator(const SpinBasis& basis, int site);

/// Total S^2 = (sum_i s_i)^2 on all sites of the basis.
SparseHamiltonian total_spin_squared(const SpinBasis& basis);

Statevector apply(const SparseHamiltonian& H, const Statevector& v);

/// Single-spin-flip lowering operator sum_i s_i^- from `from` into `to`.
Eigen::VectorXcd apply_lowering(const SpinBasis& from, const SpinBasis& to,
                                const Eigen::VectorXcd& v);

}  // namespace spinbus

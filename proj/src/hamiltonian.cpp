// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinbus {

// ---------------------------------------------------------------------------
// Statevector
// ---------------------------------------------------------------------------

Statevector::Statevector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (!basis_) throw std::invalid_argument("Statevector: null basis");
    if (static_cast<std::size_t>(amps_.size()) != basis_->dim()) {
        throw std::invalid_argument("Statevector: amplitude count does not match basis dimension");
    }
}

Statevector Statevector::basis_state(BasisPtr basis, Config c) {
    auto idx = basis->index_of(c);
    if (!idx) throw std::invalid_argument("Statevector::basis_state: configuration not in basis");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
    amps[static_cast<Eigen::Index>(*idx)] = 1.0;
    return Statevector(std::move(basis), std::move(amps));
}

cplx Statevector::amplitude(Config c) const {
    auto idx = basis_->index_of(c);
    return idx ? amps_[static_cast<Eigen::Index>(*idx)] : cplx{0.0, 0.0};
}

void Statevector::normalize() {
    const double n = amps_.norm();
    if (n == 0.0) throw std::domain_error("Statevector::normalize: zero vector");
    amps_ /= n;
}

Statevector Statevector::embed(BasisPtr target) const {
    if (target->n_sites() != basis_->n_sites()) {
        throw std::invalid_argument("Statevector::embed: site count mismatch");
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->dim()));
    for (std::size_t i = 0; i < dim(); ++i) {
        const cplx a = amps_[static_cast<Eigen::Index>(i)];
        if (a == cplx{}) continue;
        auto j = target->index_of(basis_->state(i));
        if (!j) throw std::invalid_argument("Statevector::embed: amplitude outside target basis");
        out[static_cast<Eigen::Index>(*j)] = a;
    }
    return Statevector(std::move(target), std::move(out));
}

cplx inner(const Statevector& a, const Statevector& b) {
    if (!(a.basis() == b.basis())) throw std::invalid_argument("inner: basis mismatch");
    return a.amplitudes().dot(b.amplitudes());
}

double overlap_probability(const Statevector& a, const Statevector& b) {
    return std::norm(inner(a, b));
}

// ---------------------------------------------------------------------------
// SparseHamiltonian
// ---------------------------------------------------------------------------

SparseHamiltonian::SparseHamiltonian(std::size_t dim, std::vector<Entry> triplets) : dim_(dim) {
    for (const auto& e : triplets) {
        if (e.row >= dim || e.col >= dim) {
            throw std::out_of_range("SparseHamiltonian: entry index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    entries_.reserve(triplets.size());
    for (const auto& e : triplets) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });

    row_ptr_.assign(dim_ + 1, 0);
    for (const auto& e : entries_) ++row_ptr_[e.row + 1];
    for (std::size_t r = 0; r < dim_; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

double SparseHamiltonian::norm_bound() const {
    double best = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(entries_[k].value);
        best = std::max(best, s);
    }
    return best;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : entries_) {
        m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    }
    return m;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> SparseHamiltonian::to_eigen() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(entries_.size());
    for (const auto& e : entries_) {
        t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> m(static_cast<Eigen::Index>(dim_),
                                                   static_cast<Eigen::Index>(dim_));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

namespace {

template <class Vec>
void csr_multiply(const std::vector<Entry>& entries, const std::vector<std::size_t>& row_ptr,
                  std::size_t dim, const Vec& x, Vec& y) {
    if (static_cast<std::size_t>(x.size()) != dim) {
        throw std::invalid_argument("SparseHamiltonian::multiply: dimension mismatch");
    }
    y.resize(x.size());
    for (std::size_t r = 0; r < dim; ++r) {
        typename Vec::Scalar acc{0.0};
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            acc += entries[k].value * x[static_cast<Eigen::Index>(entries[k].col)];
        }
        y[static_cast<Eigen::Index>(r)] = acc;
    }
}

}  // namespace

void SparseHamiltonian::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    csr_multiply(entries_, row_ptr_, dim_, x, y);
}

void SparseHamiltonian::multiply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    csr_multiply(entries_, row_ptr_, dim_, x, y);
}

SparseHamiltonian SparseHamiltonian::operator+(const SparseHamiltonian& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("SparseHamiltonian::operator+: dimension mismatch");
    std::vector<Entry> all(entries_);
    all.insert(all.end(), other.entries_.begin(), other.entries_.end());
    return SparseHamiltonian(dim_, std::move(all));
}

SparseHamiltonian SparseHamiltonian::scaled(double factor) const {
    std::vector<Entry> all(entries_);
    for (auto& e : all) e.value *= factor;
    return SparseHamiltonian(dim_, std::move(all));
}

// ---------------------------------------------------------------------------
// Model specs
// ---------------------------------------------------------------------------

void ChainSpec::validate() const {
    if (N < 1) throw std::invalid_argument("ChainSpec: N must be >= 1");
    if (N % 2 == 0) throw std::invalid_argument("ChainSpec: bus size N must be odd");
    if (!bond_J.empty() && bond_J.size() != static_cast<std::size_t>(N - 1)) {
        throw std::invalid_argument("ChainSpec: per-bond list must have N-1 entries");
    }
    for (int i = 0; i + 1 < N; ++i) {
        if (!(bond(i) > 0.0)) throw std::invalid_argument("ChainSpec: bus couplings must be positive");
    }
}

bool QubitCoupling::active(double t) const {
    if (schedule.empty()) return true;
    return std::any_of(schedule.begin(), schedule.end(),
                       [t](const Interval& iv) { return iv.start <= t && t < iv.end; });
}

void QubitCoupling::validate(int bus_size) const {
    if (node < 1 || node > bus_size) {
        throw std::out_of_range("QubitCoupling: node " + std::to_string(node) +
                                " outside bus of size " + std::to_string(bus_size));
    }
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k].end > schedule[k].start)) {
            throw std::invalid_argument("QubitCoupling: empty or reversed interval");
        }
        if (k > 0 && schedule[k].start < schedule[k - 1].end) {
            throw std::invalid_argument("QubitCoupling: intervals must be ordered and non-overlapping");
        }
    }
}

// ---------------------------------------------------------------------------
// Operator builders
// ---------------------------------------------------------------------------

SparseHamiltonian exchange_operator(const SpinBasis& basis, std::span<const ExchangeTerm> terms,
                                    double field) {
    const int n = basis.n_sites();
    for (const auto& t : terms) {
        if (t.a < 0 || t.b < 0 || t.a >= n || t.b >= n || t.a == t.b) {
            throw std::out_of_range("exchange_operator: invalid site pair");
        }
    }
    std::vector<Entry> trip;
    trip.reserve(basis.dim() * (terms.size() + 1));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const Config c = basis.state(i);
        double diag = 0.5 * field * two_sz_of(c, n);
        for (const auto& t : terms) {
            if (t.J == 0.0) continue;
            if (bit(c, t.a) == bit(c, t.b)) {
                diag += 0.25 * t.J;
            } else {
                diag -= 0.25 * t.J;
                const Config flipped = c ^ ((Config{1} << t.a) | (Config{1} << t.b));
                auto j = basis.index_of(flipped);
                if (!j) throw std::logic_error("exchange_operator: basis not closed under S_z-conserving flips");
                trip.push_back({*j, i, 0.5 * t.J});
            }
        }
        trip.push_back({i, i, diag});
    }
    return SparseHamiltonian(basis.dim(), std::move(trip));
}

SparseHamiltonian heisenberg_hamiltonian(const ChainSpec& spec, const SpinBasis& basis) {
    if (spec.N < 1) throw std::invalid_argument("heisenberg_hamiltonian: N must be >= 1");
    if (!spec.bond_J.empty() && spec.bond_J.size() != static_cast<std::size_t>(spec.N - 1)) {
        throw std::invalid_argument("heisenberg_hamiltonian: per-bond list must have N-1 entries");
    }
    if (basis.n_sites() < spec.N) {
        throw std::invalid_argument("heisenberg_hamiltonian: basis has " + std::to_string(basis.n_sites()) +
                                    " sites but the chain needs " + std::to_string(spec.N));
    }
    std::vector<ExchangeTerm> bonds;
    for (int i = 0; i + 1 < spec.N; ++i) bonds.push_back({i, i + 1, spec.bond(i)});
    return exchange_operator(basis, bonds, spec.B);
}

SparseHamiltonian couple_qubits(const SparseHamiltonian& H, const SpinBasis& basis, int bus_size,
                                std::span<const QubitCoupling> couplings, double t) {
    if (H.dim() != basis.dim()) throw std::invalid_argument("couple_qubits: H and basis dimension differ");
    if (basis.n_sites() != bus_size + static_cast<int>(couplings.size())) {
        throw std::invalid_argument("couple_qubits: basis must hold the bus plus one site per coupling");
    }
    std::vector<ExchangeTerm> terms;
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        couplings[k].validate(bus_size);
        if (couplings[k].J == 0.0 || !couplings[k].active(t)) continue;
        terms.push_back({bus_size + static_cast<int>(k), couplings[k].node - 1, couplings[k].J});
    }
    if (terms.empty()) return H;
    return H + exchange_operator(basis, terms, 0.0);
}

SparseHamiltonian sz_operator(const SpinBasis& basis, int site) {
    if (site < 0 || site >= basis.n_sites()) throw std::out_of_range("sz_operator: site out of range");
    std::vector<Entry> trip;
    trip.reserve(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        trip.push_back({i, i, bit(basis.state(i), site) ? 0.5 : -0.5});
    }
    return SparseHamiltonian(basis.dim(), std::move(trip));
}

SparseHamiltonian total_spin_squared(const SpinBasis& basis) {
    const int n = basis.n_sites();
    std::vector<ExchangeTerm> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.push_back({a, b, 2.0});
    SparseHamiltonian s2 = exchange_operator(basis, pairs, 0.0);
    std::vector<Entry> diag;
    for (std::size_t i = 0; i < basis.dim(); ++i) diag.push_back({i, i, 0.75 * n});
    return s2 + SparseHamiltonian(basis.dim(), std::move(diag));
}

Statevector apply(const SparseHamiltonian& H, const Statevector& v) {
    if (H.dim() != v.dim()) throw std::invalid_argument("apply: dimension mismatch");
    Eigen::VectorXcd out;
    H.multiply(v.amplitudes(), out);
    return Statevector(v.basis_ptr(), std::move(out));
}

Eigen::VectorXcd apply_lowering(const SpinBasis& from, const SpinBasis& to, const Eigen::VectorXcd& v) {
    if (from.n_sites() != to.n_sites()) throw std::invalid_argument("apply_lowering: site count mismatch");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(to.dim()));
    for (std::size_t i = 0; i < from.dim(); ++i) {
        const Config c = from.state(i);
        for (int s = 0; s < from.n_sites(); ++s) {
            if (!bit(c, s)) continue;
            auto j = to.index_of(c & ~(Config{1} << s));
            if (!j) throw std::invalid_argument("apply_lowering: target basis does not contain lowered state");
            out[static_cast<Eigen::Index>(*j)] += v[static_cast<Eigen::Index>(i)];
        }
    }
    return out;
}

}  // namespace spinbus

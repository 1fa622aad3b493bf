// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/busgate.hpp"

#include "spinbus/angular.hpp"
#include "spinbus/dynamics.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/linalg.hpp"
#include "spinbus/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinbus {

using std::numbers::pi;

void StarModel::validate() const {
    if (n < 1 || n > 12) throw std::invalid_argument("StarModel: n must be in [1, 12]");
    if (!(J_star > 0.0)) throw std::invalid_argument("StarModel: J* must be positive (antiferromagnetic node)");
}

SparseHamiltonian star_hamiltonian(const StarModel& model) {
    model.validate();
    const SpinBasis basis = build_basis(model.n + 1);
    std::vector<ExchangeTerm> terms;
    for (int q = 1; q <= model.n; ++q) terms.push_back({q, 0, model.J_star});
    return exchange_operator(basis, terms);
}

double decoupling_time(int n, double J_star) {
    if (n < 1) throw std::invalid_argument("decoupling_time: n must be >= 1");
    if (J_star == 0.0) throw std::invalid_argument("decoupling_time: zero coupling");
    const double J = std::abs(J_star);
    if (n == 2) return 4.0 * pi / (3.0 * J);
    return (n % 2 == 0 ? 4.0 * pi : 2.0 * pi) / J;
}

double spectrum_width_formula(const StarModel& model) { return model.J_star * (model.n + 1) / 2.0; }

double spectrum_width(const StarModel& model) {
    const auto ev = eig_dense(star_hamiltonian(model)).eigenvalues;
    return ev[ev.size() - 1] - ev[0];
}

namespace {

std::string format_sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// Rows/cols with bus bit b.
Eigen::MatrixXcd bus_block(const Eigen::MatrixXcd& U, int b_row, int b_col) {
    const Eigen::Index q = U.rows() / 2;
    Eigen::MatrixXcd out(q, q);
    for (Eigen::Index r = 0; r < q; ++r)
        for (Eigen::Index c = 0; c < q; ++c) out(r, c) = U(2 * r + b_row, 2 * c + b_col);
    return out;
}

Eigen::MatrixXcd bus_identity_times(const Eigen::MatrixXcd& Un) {
    const Eigen::Index q = Un.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * q, 2 * q);
    for (Eigen::Index r = 0; r < q; ++r)
        for (Eigen::Index c = 0; c < q; ++c) out(2 * r, 2 * c) = out(2 * r + 1, 2 * c + 1) = Un(r, c);
    return out;
}

// Star propagator assembled from its S_z blocks.
Eigen::MatrixXcd star_propagator(const StarModel& model, double tau) {
    const int sites = model.n + 1;
    std::vector<ExchangeTerm> terms;
    for (int q = 1; q <= model.n; ++q) terms.push_back({q, 0, model.J_star});
    const Eigen::Index dim = Eigen::Index{1} << sites;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(dim, dim);
    for (int up = 0; up <= sites; ++up) {
        const SpinBasis b(sites, 2 * up - sites);
        const Eigen::MatrixXcd u = dense_propagator(exchange_operator(b, terms).to_dense(), tau);
        for (std::size_t r = 0; r < b.dim(); ++r)
            for (std::size_t c = 0; c < b.dim(); ++c)
                U(static_cast<Eigen::Index>(b.state(r)), static_cast<Eigen::Index>(b.state(c))) =
                    u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return U;
}

Eigen::MatrixXcd sector_block(const Eigen::MatrixXcd& m, const SpinBasis& b) {
    const auto d = static_cast<Eigen::Index>(b.dim());
    Eigen::MatrixXcd blk(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            blk(r, c) = m(static_cast<Eigen::Index>(b.state(static_cast<std::size_t>(r))),
                          static_cast<Eigen::Index>(b.state(static_cast<std::size_t>(c))));
    return blk;
}

// Spectral norm of an operator that conserves S_z on `sites` sites.
double sector_norm(const Eigen::MatrixXcd& m, int sites) {
    double worst = 0.0;
    for (int up = 0; up <= sites; ++up) {
        worst = std::max(worst, spectral_norm(sector_block(m, SpinBasis(sites, 2 * up - sites))));
    }
    return worst;
}

// Polar unitary factor, block by block in S_z.
Eigen::MatrixXcd sector_polar(const Eigen::MatrixXcd& m, int sites) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    for (int up = 0; up <= sites; ++up) {
        const SpinBasis b(sites, 2 * up - sites);
        const Eigen::MatrixXcd u = polar_unitary(sector_block(m, b));
        for (std::size_t r = 0; r < b.dim(); ++r)
            for (std::size_t c = 0; c < b.dim(); ++c)
                out(static_cast<Eigen::Index>(b.state(r)), static_cast<Eigen::Index>(b.state(c))) =
                    u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return out;
}

}  // namespace

BusGateReport bus_gate_at(const StarModel& model, double tau) {
    model.validate();
    BusGateReport r;
    r.tau = tau;
    r.U_full = star_propagator(model, tau);
    const Eigen::MatrixXcd b00 = bus_block(r.U_full, 0, 0), b11 = bus_block(r.U_full, 1, 1);
    r.bus_block_mismatch = sector_norm(b00 - b11, model.n);
    r.U_n = sector_polar(0.5 * (b00 + b11), model.n);
    r.residual = sector_norm(r.U_full - bus_identity_times(r.U_n), model.n + 1);
    r.is_identity = (r.U_n - Eigen::MatrixXcd::Identity(r.U_n.rows(), r.U_n.cols())).cwiseAbs().maxCoeff() < 1e-10;

    const auto ang = total_spin_basis(model.n);
    Eigen::MatrixXcd V(r.U_n.rows(), static_cast<Eigen::Index>(ang.size()));
    for (std::size_t k = 0; k < ang.size(); ++k) V.col(static_cast<Eigen::Index>(k)) = ang[k].vector.cast<cplx>();
    const Eigen::MatrixXcd A = V.adjoint() * r.U_n * V;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            if (i != j) r.angular_off_diagonal = std::max(r.angular_off_diagonal, std::abs(A(i, j)));
        }
        const int tj = ang[static_cast<std::size_t>(i)].two_j;
        auto [it, fresh] = r.phases.try_emplace(tj, A(i, i));
        if (!fresh) r.phase_spread = std::max(r.phase_spread, std::abs(A(i, i) - it->second));
    }
    return r;
}

BusGateReport bus_gate(const StarModel& model) {
    model.validate();
    auto r = bus_gate_at(model, decoupling_time(model.n, model.J_star));
    if (r.residual > 1e-8) {
        throw ClaimViolation("bus_gate: U(tau) does not factorize, residual " + std::to_string(r.residual));
    }
    return r;
}

double off_block_magnitude(const StarModel& model, double tau) {
    const auto map = block_map(model.n);
    const Eigen::MatrixXd B = map.basis_matrix();
    const Eigen::MatrixXcd U = dense_propagator(star_hamiltonian(model).to_dense(), tau);
    const Eigen::MatrixXcd A = B.cast<cplx>().adjoint() * U * B.cast<cplx>();
    std::vector<std::size_t> owner;
    for (std::size_t b = 0; b < map.blocks.size(); ++b)
        for (std::size_t s = 0; s < map.blocks[b].states.size(); ++s) owner.push_back(b);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (owner[static_cast<std::size_t>(i)] != owner[static_cast<std::size_t>(j)]) {
                worst = std::max(worst, std::abs(A(i, j)));
            }
    return worst;
}

TimingError timing_error(const StarModel& model, double delta) {
    model.validate();
    const Eigen::MatrixXd H = star_hamiltonian(model).to_dense();
    const double tau = decoupling_time(model.n, model.J_star);
    TimingError e;
    e.epsilon = spectral_norm(dense_propagator(H, tau * (1.0 + delta)) - dense_propagator(H, tau));
    e.bound = 0.5 * pi * (model.n + 2) * std::abs(delta);
    e.ratio = e.bound > 0.0 ? e.epsilon / e.bound : 0.0;
    return e;
}

double timing_fidelity_bound(int n, double delta) {
    return 0.5 * pi * pi * (n + 1.0) * (n + 1.0) * delta * delta;
}

double timing_fidelity_check(const StarModel& model, double delta, int trials, std::uint64_t seed) {
    model.validate();
    if (trials < 1) throw std::invalid_argument("timing_fidelity_check: trials must be >= 1");
    const Eigen::MatrixXd H = star_hamiltonian(model).to_dense();
    const double tau = decoupling_time(model.n, model.J_star);
    // U(tau)^dagger U(tau (1 + delta)) = exp(-i H tau delta)
    const Eigen::MatrixXcd drift = dense_propagator(H, tau * delta);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXcd psi = t % 2 == 0 ? random_product_state(model.n + 1, rng)
                                                : random_state(static_cast<Eigen::Index>(model.dim()), rng);
        const double f = std::norm(psi.dot(drift * psi));
        worst = std::max(worst, 1.0 - f);
    }
    const double bound = timing_fidelity_bound(model.n, delta);
    if (worst > bound + 1e-14) {
        throw ClaimViolation("timing_fidelity_check: 1 - f = " + format_sci(worst) +
                             " exceeds bound " + format_sci(bound));
    }
    return worst;
}

int max_gate_size(double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("max_gate_size: ratio must be positive");
    return static_cast<int>(std::floor(std::pow(pi * pi * ratio / std::sqrt(2.0), 2.0 / 3.0) * (1.0 + 1e-12)));
}

MicroscopicGateReport microscopic_bus_gate(const ChainSpec& chain, std::span<const int> nodes, double J_q) {
    chain.validate();
    if (nodes.empty()) throw std::invalid_argument("microscopic_bus_gate: no qubits");
    if (!(J_q > 0.0)) throw std::invalid_argument("microscopic_bus_gate: J_q must be positive");
    ChainSpec zero_field = chain;
    zero_field.B = 0.0;
    const BusManifold bus = bus_manifold(zero_field);
    const int n = static_cast<int>(nodes.size());
    const int N = chain.N;

    double j_min = std::numeric_limits<double>::infinity();
    for (int node : nodes) {
        if (node < 1 || node > N || node % 2 == 0) {
            throw std::invalid_argument("microscopic_bus_gate: qubits must sit on odd nodes");
        }
        j_min = std::min(j_min, bus.j_eff[static_cast<std::size_t>(node - 1)]);
    }
    MicroscopicGateReport r;
    r.J_star = J_q * j_min;

    std::vector<QubitCoupling> couplings;
    for (int node : nodes) {
        const double bare = r.J_star / bus.j_eff[static_cast<std::size_t>(node - 1)];
        r.bare.push_back(bare);
        couplings.push_back({node, bare, {}});
    }
    const SpinBasis full = build_basis(N + n);
    const auto H = couple_qubits(heisenberg_hamiltonian(zero_field, full), full, N, couplings, 0.0);
    const Eigen::MatrixXcd M = manifold_embedding(bus, full, n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense());
    const Eigen::Index low = Eigen::Index{1} << (n + 1);
    r.J_star_exact = 2.0 * (es.eigenvalues()[low - 1] - es.eigenvalues()[0]) / (n + 1);
    r.tau = decoupling_time(n, r.J_star_exact);
    const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::exp(cplx(0.0, -r.tau * es.eigenvalues()[i]));
    const Eigen::MatrixXcd evolved = V * (ph.asDiagonal() * (V.adjoint() * M));
    r.projected = M.adjoint() * evolved;
    for (Eigen::Index c = 0; c < r.projected.cols(); ++c) {
        r.leakage = std::max(r.leakage, 1.0 - r.projected.col(c).squaredNorm());
    }

    const auto effective = bus_gate(StarModel{n, r.J_star_exact});
    r.infidelity = 1.0 - gate_fidelity(r.projected, effective.U_full);
    return r;
}

}  // namespace spinbus

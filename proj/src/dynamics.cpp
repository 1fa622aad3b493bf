// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/dynamics.hpp"

#include "spinbus/errors.hpp"
#include "spinbus/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinbus {

using std::numbers::pi;

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd m, double tolerance) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("UnitaryMatrix: not square");
    const double defect = unitarity_defect(m_);
    if (defect > tolerance) {
        throw std::invalid_argument("UnitaryMatrix: unitarity defect " + std::to_string(defect));
    }
}

bool UnitaryMatrix::is_permutation(double tol) const {
    for (Eigen::Index c = 0; c < m_.cols(); ++c) {
        int ones = 0;
        for (Eigen::Index r = 0; r < m_.rows(); ++r) {
            const cplx z = m_(r, c);
            if (std::abs(z - 1.0) <= tol) {
                ++ones;
            } else if (std::abs(z) > tol) {
                return false;
            }
        }
        if (ones != 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXcd krylov_evolve(const SparseHamiltonian& H, Eigen::VectorXcd psi, double t,
                               const EvolveOptions& opts) {
    const double total = std::abs(t);
    const double sign = t < 0 ? -1.0 : 1.0;
    const auto dim = static_cast<Eigen::Index>(H.dim());
    const int m_max = std::max(2, std::min<int>(opts.krylov_dim, static_cast<int>(dim)));
    double remaining = total;
    double dt = total;
    long steps = 0;

    while (remaining > 0.0) {
        const double beta0 = psi.norm();
        std::vector<Eigen::VectorXcd> V{psi / beta0};
        std::vector<double> alpha, beta;
        Eigen::VectorXcd w;
        double beta_last = 0.0;
        for (int j = 0; j < m_max; ++j) {
            H.multiply(V.back(), w);
            alpha.push_back(V.back().dot(w).real());
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : V) w -= q.dot(w) * q;
            beta_last = w.norm();
            if (beta_last < 1e-13 || j + 1 == m_max) break;
            beta.push_back(beta_last);
            V.push_back(w / beta_last);
        }
        const bool invariant = beta_last < 1e-13;
        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) T(i, i) = alpha[static_cast<std::size_t>(i)];
        for (Eigen::Index i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const Eigen::VectorXcd e1_in_eig = es.eigenvectors().row(0).transpose().cast<cplx>();

        auto step_coeffs = [&](double h) {
            Eigen::VectorXcd ph(m);
            for (Eigen::Index i = 0; i < m; ++i) ph[i] = std::exp(cplx(0.0, -sign * h * es.eigenvalues()[i]));
            return Eigen::VectorXcd(es.eigenvectors().cast<cplx>() * ph.cwiseProduct(e1_in_eig));
        };

        dt = std::min(remaining, invariant ? remaining : 2.0 * dt);
        Eigen::VectorXcd c = step_coeffs(dt);
        if (!invariant) {
            // a-posteriori local error estimate beta_m |c_m|
            while (beta_last * std::abs(c[m - 1]) * beta0 > opts.tol * dt / total) {
                dt *= 0.5;
                if (dt < 1e-12 * total) {
                    throw ConvergenceError("evolve: Krylov step size underflow",
                                           beta_last * std::abs(c[m - 1]));
                }
                c = step_coeffs(dt);
            }
        }
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
        for (Eigen::Index i = 0; i < m; ++i) next += c[i] * V[static_cast<std::size_t>(i)];
        psi = beta0 * next;
        remaining -= dt;
        if (remaining < 1e-15 * total) remaining = 0.0;
        if (++steps > 10'000'000) throw ConvergenceError("evolve: too many Krylov steps", 0.0);
    }
    return psi;
}

}  // namespace

Statevector evolve(const SparseHamiltonian& H, const Statevector& psi, double t, const EvolveOptions& opts) {
    if (H.dim() != psi.dim()) throw std::invalid_argument("evolve: dimension mismatch");
    if (t == 0.0) return psi;
    if (H.dim() <= opts.dense_cutoff) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense());
        const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
        Eigen::VectorXcd coeffs = V.adjoint() * psi.amplitudes();
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::exp(cplx(0.0, -t * es.eigenvalues()[i]));
        return Statevector(psi.basis_ptr(), V * coeffs);
    }
    return Statevector(psi.basis_ptr(), krylov_evolve(H, psi.amplitudes(), t, opts));
}

UnitaryMatrix propagator(const SparseHamiltonian& H, double t) {
    return UnitaryMatrix(dense_propagator(H.to_dense(), t));
}

// ---------------------------------------------------------------------------
// gates
// ---------------------------------------------------------------------------

double swap_time(double J_eff, SwapKind kind) {
    if (J_eff == 0.0) throw std::invalid_argument("swap_time: zero coupling");
    const double full = pi / std::abs(J_eff);
    return kind == SwapKind::full ? full : 0.5 * full;
}

Eigen::Matrix4cd ideal_root_swap() {
    Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    return (Eigen::Matrix4cd::Identity() - cplx(0.0, 1.0) * swap) / std::sqrt(2.0);
}

void apply_exchange_gate(const SpinBasis& basis, int a, int b, double theta, Eigen::MatrixXcd& m) {
    if (static_cast<std::size_t>(m.rows()) != basis.dim()) {
        throw std::invalid_argument("apply_exchange_gate: row count does not match basis");
    }
    // Parallel pair: s.s = 1/4.  Antiparallel pair {|01>,|10>}: s.s = -1/4 + X/2.
    const cplx same = std::exp(cplx(0.0, -0.25 * theta));
    const cplx outer = std::exp(cplx(0.0, 0.25 * theta));
    const cplx diag = outer * std::cos(0.5 * theta);
    const cplx off = outer * cplx(0.0, -std::sin(0.5 * theta));
    const Config mask = (Config{1} << a) | (Config{1} << b);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const Config c = basis.state(i);
        const auto ri = static_cast<Eigen::Index>(i);
        if (bit(c, a) == bit(c, b)) {
            m.row(ri) *= same;
            continue;
        }
        const Config partner = c ^ mask;
        if (partner < c) continue;  // handled with its partner
        const auto rj = static_cast<Eigen::Index>(*basis.index_of(partner));
        const Eigen::RowVectorXcd ra = m.row(ri), rb = m.row(rj);
        m.row(ri) = diag * ra + off * rb;
        m.row(rj) = off * ra + diag * rb;
    }
}

std::vector<std::array<int, 2>> chain_swap_sequence(int n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("chain_swap_sequence: need at least two qubits");
    std::vector<std::array<int, 2>> seq;
    for (int i = 0; i + 1 < n_qubits; ++i) seq.push_back({i, i + 1});
    for (int i = n_qubits - 3; i >= 0; --i) seq.push_back({i, i + 1});
    return seq;
}

Eigen::MatrixXcd chain_swap_block(const SpinBasis& basis, std::span<const double> couplings, double J_nominal) {
    const int n = basis.n_sites();
    const auto seq = chain_swap_sequence(n);
    if (couplings.size() != seq.size()) {
        throw std::invalid_argument("chain_swap_unitary: need " + std::to_string(seq.size()) + " couplings");
    }
    if (J_nominal == 0.0) throw std::invalid_argument("chain_swap_unitary: zero nominal coupling");
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
    const double duration = pi / J_nominal;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        apply_exchange_gate(basis, seq[k][0], seq[k][1], couplings[k] * duration, m);
    }
    return m * std::exp(cplx(0.0, 0.25 * pi * static_cast<double>(seq.size())));
}

UnitaryMatrix chain_swap_unitary(int n_qubits, std::span<const double> couplings, double J_nominal) {
    return UnitaryMatrix(chain_swap_block(build_basis(n_qubits), couplings, J_nominal));
}

// ---------------------------------------------------------------------------
// serial protocol
// ---------------------------------------------------------------------------

namespace {

struct SerialSetup {
    BasisPtr basis;
    std::vector<SparseHamiltonian> stage_H;
    std::vector<double> stage_t;
    Eigen::MatrixXcd manifold;       ///< columns |b> (x) |q>, index b + 2 q
    int qubit_shift = 0;
};

}  // namespace

Eigen::MatrixXcd manifold_embedding(const BusManifold& bus, const SpinBasis& full, int n_qubits) {
    const int N = bus.N;
    if (full.n_sites() != N + n_qubits || !full.full()) {
        throw std::invalid_argument("manifold_embedding: need the full basis of bus plus qubits");
    }
    const auto nq = Config{1} << n_qubits;
    Eigen::MatrixXcd cols = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(full.dim()),
                                                   static_cast<Eigen::Index>(2 * nq));
    for (int b = 0; b < 2; ++b) {
        const Statevector& s = b == 0 ? bus.state0 : bus.state1;
        for (Config q = 0; q < nq; ++q) {
            for (std::size_t k = 0; k < s.dim(); ++k) {
                const Config c = s.basis().state(k) | (q << N);
                cols(static_cast<Eigen::Index>(*full.index_of(c)), static_cast<Eigen::Index>(b + 2 * q)) =
                    s.amplitudes()[static_cast<Eigen::Index>(k)];
            }
        }
    }
    return cols;
}

namespace {

SerialSetup make_setup(const SerialConfig& cfg, const BusManifold& bus) {
    cfg.chain.validate();
    const int N = cfg.chain.N;
    if (bus.N != N) throw std::invalid_argument("serial_protocol: bus manifold size mismatch");
    for (int node : {cfg.source_node, cfg.target_node}) {
        if (node < 1 || node > N) throw std::out_of_range("serial_protocol: node outside bus");
        if (node % 2 == 0) throw std::invalid_argument("serial_protocol: even (ferromagnetic) nodes are unsupported");
    }
    if (cfg.source_node == cfg.target_node) throw std::invalid_argument("serial_protocol: source and target coincide");
    if (!(cfg.J_q > 0.0)) throw std::invalid_argument("serial_protocol: J_q must be positive");

    const double Js = cfg.J_q * bus.j_eff[static_cast<std::size_t>(cfg.source_node - 1)];
    const double Jt = cfg.J_q * bus.j_eff[static_cast<std::size_t>(cfg.target_node - 1)];
    const double t1 = swap_time(Js, SwapKind::full);
    const double t2 = swap_time(Jt, SwapKind::root);

    SerialSetup s;
    s.stage_t = {t1, t2, t1};
    if (cfg.model == BusModel::effective) {
        s.basis = make_basis(3);
        s.qubit_shift = 1;
        for (auto [site, J] : {std::pair{1, Js}, std::pair{2, Jt}, std::pair{1, Js}}) {
            const ExchangeTerm term{site, 0, J};
            s.stage_H.push_back(exchange_operator(*s.basis, std::span(&term, 1)));
        }
        s.manifold = Eigen::MatrixXcd::Identity(8, 8);
        return s;
    }

    s.basis = make_basis(N + 2);
    s.qubit_shift = N;
    std::vector<QubitCoupling> couplings{
        {cfg.source_node, cfg.J_q, {{0.0, t1}, {t1 + t2, t1 + t2 + t1}}},
        {cfg.target_node, cfg.J_q, {{t1, t1 + t2}}},
    };
    const auto Hb = heisenberg_hamiltonian(cfg.chain, *s.basis);
    double start = 0.0;
    for (double dur : s.stage_t) {
        s.stage_H.push_back(couple_qubits(Hb, *s.basis, N, couplings, start + 0.5 * dur));
        start += dur;
    }
    s.manifold = manifold_embedding(bus, *s.basis, 2);
    return s;
}

Statevector initial_state(const SerialSetup& s, const Eigen::Vector4cd& q, int bus_state) {
    if (bus_state != 0 && bus_state != 1) throw std::invalid_argument("serial_protocol: bus_state must be 0 or 1");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(s.manifold.rows());
    for (int k = 0; k < 4; ++k) amps += q[k] * s.manifold.col(bus_state + 2 * k);
    Statevector psi(s.basis, amps);
    psi.normalize();
    return psi;
}

Statevector ideal_state(const SerialSetup& s, const Eigen::Vector4cd& q, int bus_state) {
    Eigen::Vector4cd target = ideal_root_swap() * q;
    return initial_state(s, target, bus_state);
}

double leakage_of(const SerialSetup& s, const Statevector& psi) {
    const Eigen::VectorXcd proj = s.manifold.adjoint() * psi.amplitudes();
    return std::max(0.0, psi.amplitudes().squaredNorm() - proj.squaredNorm());
}

}  // namespace

SerialResult serial_protocol(const SerialConfig& cfg, const BusManifold& bus, const Eigen::Vector4cd& qubit_state,
                             int bus_state) {
    const auto setup = make_setup(cfg, bus);
    Statevector psi = initial_state(setup, qubit_state, bus_state);
    double elapsed = 0.0;
    for (std::size_t k = 0; k < setup.stage_H.size(); ++k) {
        psi = evolve(setup.stage_H[k], psi, setup.stage_t[k]);
        elapsed += setup.stage_t[k];
    }
    const Statevector ideal = ideal_state(setup, qubit_state, bus_state);
    SerialResult r{psi, leakage_of(setup, psi), elapsed, overlap_probability(ideal, psi)};
    return r;
}

SerialResult serial_protocol(const SerialConfig& cfg, const Eigen::Vector4cd& qubit_state, int bus_state) {
    ChainSpec zero_field = cfg.chain;
    zero_field.B = 0.0;
    return serial_protocol(cfg, bus_manifold(zero_field), qubit_state, bus_state);
}

Eigen::Matrix4cd serial_qubit_gate(const SerialConfig& cfg, const BusManifold& bus, int bus_state) {
    const auto setup = make_setup(cfg, bus);
    Eigen::Matrix4cd gate;
    for (int k = 0; k < 4; ++k) {
        Eigen::Vector4cd e = Eigen::Vector4cd::Zero();
        e[k] = 1.0;
        Statevector psi = initial_state(setup, e, bus_state);
        for (std::size_t s = 0; s < setup.stage_H.size(); ++s) psi = evolve(setup.stage_H[s], psi, setup.stage_t[s]);
        const Eigen::VectorXcd proj = setup.manifold.adjoint() * psi.amplitudes();
        for (int r = 0; r < 4; ++r) gate(r, k) = proj[bus_state + 2 * r];
    }
    return gate;
}

std::vector<SerialSample> serial_time_series(const SerialConfig& cfg, const BusManifold& bus,
                                             const Eigen::Vector4cd& qubit_state, int bus_state,
                                             int samples_per_stage) {
    if (samples_per_stage < 1) throw std::invalid_argument("serial_time_series: need at least one sample per stage");
    const auto setup = make_setup(cfg, bus);
    const Statevector ideal = ideal_state(setup, qubit_state, bus_state);
    Statevector psi = initial_state(setup, qubit_state, bus_state);
    std::vector<SerialSample> rows{{0.0, overlap_probability(ideal, psi), leakage_of(setup, psi)}};
    double t = 0.0;
    for (std::size_t k = 0; k < setup.stage_H.size(); ++k) {
        const double h = setup.stage_t[k] / samples_per_stage;
        for (int s = 0; s < samples_per_stage; ++s) {
            psi = evolve(setup.stage_H[k], psi, h);
            t += h;
            rows.push_back({t, overlap_probability(ideal, psi), leakage_of(setup, psi)});
        }
    }
    return rows;
}

Eigen::MatrixXcd effective_serial_unitary(double J_source, double J_target, const std::array<double, 3>& actual) {
    const SpinBasis basis = build_basis(3);
    const double t1 = swap_time(J_source, SwapKind::full);
    const double t2 = swap_time(J_target, SwapKind::root);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(8, 8);
    apply_exchange_gate(basis, 1, 0, actual[0] * t1, m);
    apply_exchange_gate(basis, 2, 0, actual[1] * t2, m);
    apply_exchange_gate(basis, 1, 0, actual[2] * t1, m);
    return m;
}

ProtocolTimes protocol_time_compare(int N, double J_q) {
    if (N < 2) throw std::invalid_argument("protocol_time_compare: N must be >= 2");
    if (!(J_q > 0.0)) throw std::invalid_argument("protocol_time_compare: J_q must be positive");
    auto chain = [J_q](int n) { return n * pi / J_q; };
    auto busf = [J_q](int n) { return 3.0 * pi * std::sqrt(2.0 * n - 1.0) / J_q; };
    ProtocolTimes out{chain(N), busf(N), 0};
    for (int n = 2; n < 1'000'000; ++n) {
        if (busf(n) < chain(n)) {
            out.crossover_N = n;
            break;
        }
    }
    return out;
}

}  // namespace spinbus

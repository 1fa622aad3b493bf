// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/wstate.hpp"

#include "spinbus/angular.hpp"
#include "spinbus/busgate.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace spinbus {

Statevector w_state(int n) {
    if (n < 1) throw std::invalid_argument("w_state: n must be >= 1");
    auto basis = make_basis(n);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()));
    for (int k = 0; k < n; ++k) amps[Eigen::Index{1} << k] = 1.0 / std::sqrt(static_cast<double>(n));
    return Statevector(basis, amps);
}

MeasurementOutcome measure(const Statevector& state, std::span<const int> qubits, std::span<const int> outcome_bits) {
    const int n = state.basis().n_sites();
    if (!state.basis().full()) throw std::invalid_argument("measure: state must live on a full register basis");
    if (qubits.size() != outcome_bits.size()) throw std::invalid_argument("measure: one outcome bit per qubit");
    Config mask = 0, want = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
        if (qubits[k] < 0 || qubits[k] >= n) throw std::out_of_range("measure: qubit index out of range");
        if (outcome_bits[k] != 0 && outcome_bits[k] != 1) throw std::invalid_argument("measure: outcome bits are 0 or 1");
        const Config b = Config{1} << qubits[k];
        if (mask & b) throw std::invalid_argument("measure: repeated qubit");
        mask |= b;
        if (outcome_bits[k]) want |= b;
    }
    std::vector<int> keep;
    for (int q = 0; q < n; ++q)
        if (!(mask & (Config{1} << q))) keep.push_back(q);
    if (keep.empty()) throw std::invalid_argument("measure: at least one qubit must remain");

    auto rest = make_basis(static_cast<int>(keep.size()));
    Eigen::VectorXcd post = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rest->dim()));
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const Config c = state.basis().state(i);
        if ((c & mask) != want) continue;
        Config r = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            if (bit(c, keep[k])) r |= Config{1} << k;
        post[static_cast<Eigen::Index>(r)] += state.amplitudes()[static_cast<Eigen::Index>(i)];
    }
    const double p = post.squaredNorm();
    if (p < 1e-14) throw std::domain_error("measure: outcome unreachable");
    return {p, Statevector(rest, post / std::sqrt(p))};
}

Eigen::MatrixXcd spin_parity_reflection(int m) {
    const auto ang = total_spin_basis(m);
    const Eigen::Index d = Eigen::Index{1} << m;
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d, d);
    for (const auto& e : ang) {
        const int parity = ((m - e.two_j) / 2) % 2 == 0 ? 1 : -1;
        R += parity * e.vector * e.vector.transpose();
    }
    return R.cast<cplx>();
}

Eigen::MatrixXcd qubit_gate(int m, bool* from_bus) {
    if (m < 1) throw std::invalid_argument("qubit_gate: m must be >= 1");
    static std::mutex mu;
    static std::map<int, Eigen::MatrixXcd> cache;
    const bool odd = m % 2 == 1;
    if (from_bus) *from_bus = odd;
    std::lock_guard lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) {
        Eigen::MatrixXcd g = odd ? bus_gate(StarModel{m, 1.0}).U_n : spin_parity_reflection(m);
        it = cache.emplace(m, std::move(g)).first;
    }
    return it->second;
}

namespace {

ProtocolResult run(int n_data, int m, Config initial, std::span<const int> sacrificial,
                   std::span<const int> wanted, double predicted) {
    bool from_bus = true;
    const Eigen::MatrixXcd U = qubit_gate(m, &from_bus);
    auto basis = make_basis(m);
    Statevector out(basis, U * Statevector::basis_state(basis, initial).amplitudes());
    auto meas = measure(out, sacrificial, wanted);
    const Statevector w = w_state(n_data);
    ProtocolResult r{n_data, meas.probability, meas.post_state, overlap_probability(w, meas.post_state),
                     predicted, from_bus, out};
    return r;
}

}  // namespace

ProtocolResult protocol_one(int n_data) {
    if (n_data < 1) throw std::invalid_argument("protocol_one: n_data must be >= 1");
    const int sac[] = {n_data};
    const int zero[] = {0};
    return run(n_data, n_data + 1, Config{1} << n_data, sac, zero, closed_form_p(Protocol::one, n_data));
}

ProtocolResult protocol_two(int n) {
    if (n < 2) throw std::invalid_argument("protocol_two: n must be >= 2");
    const int m = 2 * n - 1;
    std::vector<int> sac, ones;
    for (int q = n; q < m; ++q) {
        sac.push_back(q);
        ones.push_back(1);
    }
    const Config initial = (Config{1} << n) - 1;
    return run(n, m, initial, sac, ones, closed_form_p(Protocol::two, n));
}

double closed_form_p(Protocol protocol, int n) {
    if (protocol == Protocol::one) {
        if (n < 1) throw std::invalid_argument("closed_form_p: protocol one needs n >= 1");
        return 4.0 * n / ((n + 1.0) * (n + 1.0));
    }
    if (n < 2) throw std::invalid_argument("closed_form_p: protocol two needs n >= 2");
    double ratio = 1.0;
    for (int k = 1; k <= n - 1; ++k) ratio *= (2.0 * k) / (2.0 * k + 1.0);
    return n * ratio * ratio;
}

std::vector<double> protocol_two_outcome_distribution(int n) {
    if (n < 2) throw std::invalid_argument("protocol_two_outcome_distribution: n must be >= 2");
    const int m = 2 * n - 1;
    const Eigen::MatrixXcd U = qubit_gate(m);
    const Eigen::VectorXcd out = U.col((Eigen::Index{1} << n) - 1);
    std::vector<double> probs(std::size_t{1} << (n - 1), 0.0);
    for (Eigen::Index c = 0; c < out.size(); ++c) probs[static_cast<std::size_t>(c >> n)] += std::norm(out[c]);
    return probs;
}

double protocol_one_bus_disturbance(int n_data, int bus_state) {
    if (bus_state != 0 && bus_state != 1) throw std::invalid_argument("bus_state must be 0 or 1");
    const int m = n_data + 1;
    if (m % 2 == 0) throw std::invalid_argument("protocol_one_bus_disturbance: needs an odd gate size");
    const StarModel model{m, 1.0};
    const auto report = bus_gate(model);
    // bus = bit 0, qubits bits 1..m
    const Eigen::Index in = static_cast<Eigen::Index>(bus_state) + 2 * (Eigen::Index{1} << n_data);
    const Eigen::VectorXcd psi = report.U_full.col(in);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (Eigen::Index q = 0; q < psi.size() / 2; ++q)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) rho(a, b) += psi[2 * q + a] * std::conj(psi[2 * q + b]);
    Eigen::Matrix2cd target = Eigen::Matrix2cd::Zero();
    target(bus_state, bus_state) = 1.0;
    return (rho - target).cwiseAbs().maxCoeff();
}

ProtocolResult protocol_one_microscopic(int n_data, const ChainSpec& chain, std::span<const int> nodes, double J_q) {
    const int m = n_data + 1;
    if (static_cast<int>(nodes.size()) != m) throw std::invalid_argument("protocol_one_microscopic: need n_data + 1 nodes");
    if (m % 2 == 0) throw std::invalid_argument("protocol_one_microscopic: needs an odd gate size");
    const auto gate = microscopic_bus_gate(chain, nodes, J_q);
    const Eigen::Index in = 2 * (Eigen::Index{1} << n_data);  // bus |0>, sacrificial up
    const Eigen::VectorXcd a = gate.projected.col(in);
    auto data_basis = make_basis(n_data);
    const Statevector w = w_state(n_data);
    double p = 0.0, overlap = 0.0;
    Eigen::VectorXcd kept = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(data_basis->dim()));
    for (int b = 0; b < 2; ++b) {
        Eigen::VectorXcd branch = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(data_basis->dim()));
        for (Eigen::Index q = 0; q < (Eigen::Index{1} << n_data); ++q) branch[q] = a[b + 2 * q];
        p += branch.squaredNorm();
        overlap += std::norm(w.amplitudes().dot(branch));
        if (b == 0) kept = branch;
    }
    ProtocolResult r{n_data, p, Statevector(data_basis, kept / kept.norm()), overlap / p,
                     closed_form_p(Protocol::one, n_data), true,
                     Statevector(make_basis(m + 1), a)};
    return r;
}

int sample_attempts(Protocol protocol, int n, std::mt19937_64& rng, int max_attempts) {
    const double p = (protocol == Protocol::one ? protocol_one(n) : protocol_two(n)).p_success;
    std::bernoulli_distribution trial(p);
    for (int k = 1; k <= max_attempts; ++k)
        if (trial(rng)) return k;
    return max_attempts + 1;
}

}  // namespace spinbus

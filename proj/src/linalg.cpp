// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spinbus {

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    const Eigen::MatrixXcd g = m.rows() >= m.cols() ? Eigen::MatrixXcd(m.adjoint() * m) : Eigen::MatrixXcd(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double phase_aligned_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw std::invalid_argument("phase_aligned_distance: shape mismatch");
    }
    // ||u - e^{i phi} v|| = max_k |e^{i theta_k} - e^{i phi}| over eigenphases of v^dagger u.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(v.adjoint() * u, false);
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) theta.push_back(std::arg(es.eigenvalues()(k)));
    std::sort(theta.begin(), theta.end());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double largest_gap = theta.front() + two_pi - theta.back();
    for (std::size_t k = 1; k < theta.size(); ++k) largest_gap = std::max(largest_gap, theta[k] - theta[k - 1]);
    const double arc = two_pi - largest_gap;
    return 2.0 * std::sin(arc / 4.0);
}

double gate_fidelity(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
    const double d = static_cast<double>(u.rows());
    return std::norm((u.adjoint() * v).trace()) / (d * d);
}

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
    const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXd& H, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense_propagator: eigensolver failed");
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::ArrayXd theta = es.eigenvalues().array() * t;
    const Eigen::MatrixXd re = V * theta.cos().matrix().asDiagonal() * V.transpose();
    const Eigen::MatrixXd im = V * (-theta.sin()).matrix().asDiagonal() * V.transpose();
    Eigen::MatrixXcd U(H.rows(), H.cols());
    U.real() = re;
    U.imag() = im;
    return U;
}

Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = {g(rng), g(rng)};
    return v / v.norm();
}

Eigen::VectorXcd random_product_state(int n_qubits, std::mt19937_64& rng) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    for (int q = 0; q < n_qubits; ++q) {
        const Eigen::VectorXcd one = random_state(2, rng);
        Eigen::VectorXcd next(v.size() * 2);
        // new qubit is the higher bit
        next.head(v.size()) = v * one[0];
        next.tail(v.size()) = v * one[1];
        v = next;
    }
    return v;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ b);
}

}  // namespace spinbus

// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/spectral.hpp"

#include "spinbus/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace spinbus {

EigenDecomposition eig_dense(const SparseHamiltonian& H, std::size_t cutoff) {
    if (H.dim() > cutoff) {
        throw std::invalid_argument("eig_dense: dimension " + std::to_string(H.dim()) +
                                    " exceeds dense cutoff " + std::to_string(cutoff));
    }
    if (H.dim() == 0) throw std::invalid_argument("eig_dense: empty operator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.to_dense());
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_dense: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

void orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& against) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : against) w -= q.dot(w) * q;
    }
}

struct LowestRitz {
    double value;
    Eigen::VectorXd coeffs;
};

LowestRitz lowest_ritz(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    if (m == 1) return {alpha[0], Eigen::VectorXd::Ones(1)};
    Eigen::VectorXd diag(m), off(m - 1);
    for (Eigen::Index i = 0; i < m; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) off[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

}  // namespace

EigenDecomposition eig_lowest(const SparseHamiltonian& H, int k, const LanczosOptions& opts) {
    const auto dim = static_cast<Eigen::Index>(H.dim());
    if (k < 1 || k > dim) throw std::invalid_argument("eig_lowest: need 1 <= k <= dim");
    if (opts.krylov_dim < 2 || opts.max_iter < 1) throw std::invalid_argument("eig_lowest: bad options");

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    std::vector<Eigen::VectorXd> locked;
    std::vector<double> values;

    for (int target = 0; target < k; ++target) {
        Eigen::VectorXd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
        orthogonalize(v, locked);
        v.normalize();

        int used = 0;
        double best = std::numeric_limits<double>::infinity();
        bool converged = false;
        Eigen::VectorXd ritz_vec;
        double ritz_val = 0.0;
        const Eigen::Index room = dim - static_cast<Eigen::Index>(locked.size());

        while (!converged) {
            std::vector<Eigen::VectorXd> V{v};
            std::vector<double> alpha, beta;
            LowestRitz ritz{0.0, {}};
            Eigen::VectorXd w;
            for (int j = 0;; ++j) {
                H.multiply(V[static_cast<std::size_t>(j)], w);
                ++used;
                const double a = V[static_cast<std::size_t>(j)].dot(w);
                alpha.push_back(a);
                orthogonalize(w, V);
                orthogonalize(w, locked);
                const double b = w.norm();
                ritz = lowest_ritz(alpha, beta);
                const double est = b * std::abs(ritz.coeffs[ritz.coeffs.size() - 1]);
                const bool exhausted = b < 1e-13 || static_cast<Eigen::Index>(V.size()) >= room;
                if (est <= 0.1 * opts.tol || exhausted || used >= opts.max_iter ||
                    j + 1 >= opts.krylov_dim) {
                    break;
                }
                beta.push_back(b);
                V.push_back(w / b);
            }
            ritz_vec = Eigen::VectorXd::Zero(dim);
            for (std::size_t i = 0; i < alpha.size(); ++i) ritz_vec += ritz.coeffs[static_cast<Eigen::Index>(i)] * V[i];
            orthogonalize(ritz_vec, locked);
            ritz_vec.normalize();
            H.multiply(ritz_vec, w);
            ritz_val = ritz_vec.dot(w);
            const double res = (w - ritz_val * ritz_vec).norm();
            best = std::min(best, res);
            if (res <= opts.tol) {
                converged = true;
            } else if (used >= opts.max_iter) {
                throw ConvergenceError("eig_lowest: eigenpair " + std::to_string(target) +
                                           " not converged after " + std::to_string(used) +
                                           " mat-vecs (best residual " + std::to_string(best) + ")",
                                       best);
            } else {
                v = ritz_vec;
            }
        }
        locked.push_back(ritz_vec);
        values.push_back(ritz_val);
    }

    // Locking order is ascending in exact arithmetic; sort anyway.
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
    });
    EigenDecomposition out{Eigen::VectorXd(k), Eigen::MatrixXd(dim, k)};
    for (int i = 0; i < k; ++i) {
        out.eigenvalues[i] = values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        out.eigenvectors.col(i) = locked[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }
    return out;
}

EigenDecomposition eig_lowest_auto(const SparseHamiltonian& H, int k, const LanczosOptions& opts,
                                   std::size_t cutoff) {
    if (H.dim() <= cutoff) {
        auto full = eig_dense(H, cutoff);
        const auto kk = std::min<Eigen::Index>(k, full.eigenvalues.size());
        return {full.eigenvalues.head(kk), full.eigenvectors.leftCols(kk)};
    }
    return eig_lowest(H, k, opts);
}

namespace {
constexpr std::size_t kBusDenseCutoff = 512;
}  // namespace

BusManifold bus_manifold(const ChainSpec& spec, const LanczosOptions& opts) {
    spec.validate();
    if (spec.B != 0.0) throw std::invalid_argument("bus_manifold: doublet is defined at B = 0");
    const int N = spec.N;
    auto up = make_basis(N, 0.5);
    auto down = make_basis(N, -0.5);

    BusManifold bus{N, spec.J_b, 0.0, std::numeric_limits<double>::infinity(),
                    Statevector::basis_state(down, down->state(0)), Statevector::basis_state(up, up->state(0)),
                    std::vector<double>(static_cast<std::size_t>(N), 0.0)};
    if (N == 1) {
        bus.j_eff[0] = 1.0;
        return bus;
    }

    const auto H = heisenberg_hamiltonian(spec, *up);
    const auto eig = eig_lowest_auto(H, 2, opts, kBusDenseCutoff);
    bus.ground_energy = eig.eigenvalues[0];
    bus.gap = eig.eigenvalues[1] - eig.eigenvalues[0];
    if (bus.gap < 1e-9) {
        throw std::runtime_error("bus_manifold: third level degenerate with the ground doublet");
    }

    Eigen::VectorXd g = eig.eigenvectors.col(0);
    Eigen::Index pivot = 0;
    const double gmax = g.cwiseAbs().maxCoeff();
    while (std::abs(g[pivot]) < gmax - 1e-12) ++pivot;
    if (g[pivot] < 0) g = -g;

    const Eigen::VectorXcd g1 = g.cast<cplx>();
    Eigen::VectorXcd g0 = apply_lowering(*up, *down, g1);
    g0.normalize();
    bus.state1 = Statevector(up, g1);
    bus.state0 = Statevector(down, g0);

    for (std::size_t k = 0; k < up->dim(); ++k) {
        const double p = g[static_cast<Eigen::Index>(k)] * g[static_cast<Eigen::Index>(k)];
        const Config c = up->state(k);
        for (int i = 0; i < N; ++i) bus.j_eff[static_cast<std::size_t>(i)] += bit(c, i) ? p : -p;
    }
    return bus;
}

double mean_odd_node_coupling(const BusManifold& bus) {
    double sum = 0.0;
    int count = 0;
    for (int node = 1; node <= bus.N; node += 2) {
        sum += bus.j_eff[static_cast<std::size_t>(node - 1)];
        ++count;
    }
    return sum / count;
}

double gap_formula(int N, double J_b) {
    if (N < 1) throw std::invalid_argument("gap_formula: N must be positive");
    return J_b * std::numbers::pi * std::numbers::pi / (2.0 * N);
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("fit_power_law: at least two points required");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit_power_law: inputs must be positive");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law: abscissae must not all coincide");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    double ssr = 0;
    for (auto [x, y] : points) {
        const double r = std::log(y) - intercept - fit.exponent * std::log(x);
        ssr += r * r;
    }
    fit.residual = std::sqrt(ssr / n);
    if (points.size() > 2) fit.exponent_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

long adiabatic_bus_bound(double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("adiabatic_bus_bound: ratio must be positive");
    const double x = std::numbers::pi * std::numbers::pi * ratio / 4.0;
    // Relative slack so exact boundaries (ratio = 4/pi^2) are not lost to rounding.
    return static_cast<long>(std::floor(x * x * (1.0 + 1e-12)));
}

double gap_physical(double J_b_meV, int N) {
    if (J_b_meV < 0.0 || N < 1) throw std::invalid_argument("gap_physical: inputs must be positive");
    return gap_formula(N, J_b_meV) / kBoltzmannMeVPerMilliKelvin;
}

}  // namespace spinbus

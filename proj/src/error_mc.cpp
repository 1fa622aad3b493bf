// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/error_mc.hpp"

#include "spinbus/dynamics.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

namespace spinbus {

std::string to_string(ErrorDistribution d) { return d == ErrorDistribution::rademacher ? "rademacher" : "uniform"; }

ErrorDistribution parse_distribution(const std::string& s) {
    if (s == "rademacher") return ErrorDistribution::rademacher;
    if (s == "uniform") return ErrorDistribution::uniform;
    throw std::invalid_argument("unknown error distribution: " + s);
}

void ErrorScanConfig::validate() const {
    if (!(delta > 0.0)) throw std::invalid_argument("ErrorScanConfig: delta must be positive");
    if (trials < 1) throw std::invalid_argument("ErrorScanConfig: trials must be >= 1");
    std::set<int> distinct(N_list.begin(), N_list.end());
    if (distinct.size() < 3) throw std::invalid_argument("ErrorScanConfig: need at least three distinct sizes");
    for (int N : N_list)
        if (N < 2 || N > 12) throw std::invalid_argument("ErrorScanConfig: chain sizes must be in [2, 12]");
}

namespace {

// Largest singular value through the Hermitian eigenproblem A^dagger A.
double norm_via_gram(const Eigen::MatrixXcd& a) {
    if (a.size() == 1) return std::abs(a(0, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

struct Sector {
    SpinBasis basis;
    Eigen::MatrixXcd ideal;
};

const std::vector<Sector>& sectors(int N) {
    static std::mutex mu;
    static std::map<int, std::vector<Sector>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    const std::vector<double> nominal(static_cast<std::size_t>(2 * N - 3), 1.0);
    std::vector<Sector> out;
    for (int tsz = -N; tsz <= N; tsz += 2) {
        SpinBasis b(N, tsz);
        Eigen::MatrixXcd ideal = chain_swap_block(b, nominal);
        out.push_back({std::move(b), std::move(ideal)});
    }
    return cache.emplace(N, std::move(out)).first->second;
}

double draw(std::mt19937_64& rng, ErrorDistribution dist) {
    if (dist == ErrorDistribution::rademacher) return (rng() >> 63) ? 1.0 : -1.0;
    return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

void summarize(const std::vector<double>& eps, ScalingPoint& p) {
    const double n = static_cast<double>(eps.size());
    double mean = 0.0;
    for (double e : eps) mean += e;
    mean /= n;
    double var = 0.0;
    for (double e : eps) var += (e - mean) * (e - mean);
    p.mean_eps = mean;
    p.stderr_eps = eps.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
}

}  // namespace

double chain_error(int N, std::span<const double> couplings) {
    if (N < 2) throw std::invalid_argument("chain_error: N must be >= 2");
    double worst = 0.0;
    for (const auto& s : sectors(N)) {
        const Eigen::MatrixXcd actual = chain_swap_block(s.basis, couplings);
        worst = std::max(worst, norm_via_gram(actual - s.ideal));
    }
    return worst;
}

double chain_error_sample(int N, double delta, std::mt19937_64& rng, ErrorDistribution dist) {
    if (N < 2) throw std::invalid_argument("chain_error_sample: N must be >= 2");
    std::vector<double> couplings(static_cast<std::size_t>(2 * N - 3));
    for (auto& c : couplings) c = 1.0 + draw(rng, dist) * delta;
    return chain_error(N, couplings);
}

ScalingResult chain_error_scan(const ErrorScanConfig& config) {
    config.validate();
    ScalingResult r;
    r.config = config;
    r.low_statistics = config.trials < 2;
    std::vector<std::pair<double, double>> pts;
    for (int N : config.N_list) {
        std::vector<double> eps;
        eps.reserve(static_cast<std::size_t>(config.trials));
        for (int t = 0; t < config.trials; ++t) {
            std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(t)));
            eps.push_back(chain_error_sample(N, config.delta, rng, config.distribution));
        }
        ScalingPoint p{N, 2 * N - 3, 0.0, 0.0};
        summarize(eps, p);
        r.points.push_back(p);
        pts.emplace_back(static_cast<double>(p.gates), std::max(p.mean_eps, 1e-300));
    }
    r.fit = fit_power_law(pts);
    return r;
}

double bus_error_sample(int N, double delta, std::mt19937_64& rng, ErrorDistribution dist) {
    if (N < 1) throw std::invalid_argument("bus_error_sample: N must be >= 1");
    const double J = 1.0 / std::sqrt(static_cast<double>(N));
    std::array<double, 3> actual{};
    for (auto& a : actual) a = J * (1.0 + draw(rng, dist) * delta);
    const Eigen::MatrixXcd ideal = effective_serial_unitary(J, J, {J, J, J});
    return spectral_norm(effective_serial_unitary(J, J, actual) - ideal);
}

std::vector<ScalingPoint> bus_serial_error(std::span<const int> N_list, double delta, int trials, std::uint64_t seed,
                                           ErrorDistribution dist) {
    if (trials < 1) throw std::invalid_argument("bus_serial_error: trials must be >= 1");
    if (N_list.empty()) throw std::invalid_argument("bus_serial_error: empty size list");
    std::vector<ScalingPoint> out;
    for (int N : N_list) {
        std::vector<double> eps;
        for (int t = 0; t < trials; ++t) {
            std::mt19937_64 rng(derive_seed(seed, kBusStream, static_cast<std::uint64_t>(t)));
            eps.push_back(bus_error_sample(N, delta, rng, dist));
        }
        ScalingPoint p{N, 3, 0.0, 0.0};
        summarize(eps, p);
        out.push_back(p);
    }
    if (delta != 0.0) {
        auto [lo, hi] = std::minmax_element(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.mean_eps < b.mean_eps;
        });
        if (lo->mean_eps <= 0.0 || hi->mean_eps / lo->mean_eps > 1.05) {
            throw ClaimViolation("bus_serial_error: mean error varies with N");
        }
    }
    return out;
}

}  // namespace spinbus

// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "spinbus/error_mc.hpp"
#include "spinbus/errors.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace spinbus;

namespace {

constexpr double kPi = std::numbers::pi;

// S12 S23 ... S_{n-1,n} ... S23 S12 with gate k at coupling c[k] for time pi.
oracle::Mat chain_oracle(int n, const std::vector<double>& c) {
    std::vector<std::pair<int, int>> seq;
    for (int k = 0; k + 1 < n; ++k) seq.emplace_back(k, k + 1);
    for (int k = n - 3; k >= 0; --k) seq.emplace_back(k, k + 1);
    const Eigen::Index d = Eigen::Index{1} << n;
    oracle::Mat U = oracle::Mat::Identity(d, d);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        U = oracle::expm_hermitian(oracle::dot(n, seq[k].first, seq[k].second), c[k] * kPi) * U;
    }
    return U;
}

double oracle_error(int n, const std::vector<double>& c) {
    const std::vector<double> nominal(c.size(), 1.0);
    Eigen::JacobiSVD<oracle::Mat> svd(chain_oracle(n, c) - chain_oracle(n, nominal));
    return svd.singularValues()(0);
}

ErrorScanConfig small_scan() {
    ErrorScanConfig c;
    c.N_list = {3, 4, 5};
    c.delta = 1e-3;
    c.trials = 40;
    c.seed = 11;
    return c;
}

}  // namespace

TEST_SUITE("error-mc") {
    TEST_CASE("single gate error has a closed form") {
        for (double delta : {1e-4, 1e-3, 0.05}) {
            const double c[] = {1.0 + delta};
            CHECK(chain_error(2, c) == doctest::Approx(2 * std::sin(3 * kPi * delta / 8)).epsilon(1e-10));
        }
    }

    TEST_CASE("chain error matches a Kronecker-built propagator") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-0.02, 0.02);
        for (int n = 3; n <= 5; ++n) {
            std::vector<double> c(static_cast<std::size_t>(2 * n - 3));
            for (auto& x : c) x = 1.0 + u(rng);
            CAPTURE(n);
            CHECK(std::abs(chain_error(n, c) - oracle_error(n, c)) < 1e-12);
        }
    }

    TEST_CASE("nominal couplings give zero error") {
        for (int n = 2; n <= 6; ++n) {
            const std::vector<double> c(static_cast<std::size_t>(2 * n - 3), 1.0);
            CHECK(chain_error(n, c) < 1e-12);
        }
        std::mt19937_64 rng(1);
        CHECK(chain_error_sample(4, 0.0, rng) < 1e-12);
        CHECK(bus_error_sample(9, 0.0, rng) < 1e-12);
        CHECK_THROWS_AS(chain_error(1, std::vector<double>{}), std::invalid_argument);
        CHECK_THROWS_AS(chain_error(3, std::vector<double>{1.0}), std::invalid_argument);
    }

    TEST_CASE("error is first order in delta") {
        for (std::uint64_t s = 0; s < 5; ++s) {
            std::mt19937_64 a(s), b(s), c(s);
            const double e3 = chain_error_sample(3, 1e-3, a);
            const double e4 = chain_error_sample(3, 1e-4, b);
            const double e2 = chain_error_sample(3, 2e-3, c);
            CHECK(std::abs((e3 / 1e-3) / (e4 / 1e-4) - 1.0) < 0.01);
            CHECK(std::abs(e2 / e3 - 2.0) < 0.04);
        }
    }

    TEST_CASE("mean error is symmetric in the sign of delta") {
        double plus = 0.0, minus = 0.0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            std::mt19937_64 a(s), b(s);
            plus += chain_error_sample(4, 1e-3, a, ErrorDistribution::uniform);
            minus += chain_error_sample(4, -1e-3, b, ErrorDistribution::uniform);
        }
        CHECK(std::abs(plus / minus - 1.0) < 0.01);
    }

    TEST_CASE("scan is deterministic and grows with N") {
        const auto a = chain_error_scan(small_scan());
        const auto b = chain_error_scan(small_scan());
        REQUIRE(a.points.size() == 3);
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].mean_eps == b.points[i].mean_eps);
            CHECK(a.points[i].gates == 2 * a.points[i].N - 3);
            CHECK(a.points[i].stderr_eps > 0.0);
        }
        CHECK(a.points[0].mean_eps < a.points[2].mean_eps);
        CHECK(a.fit.exponent > 0.4);
        CHECK(a.fit.exponent < 1.0);
        CHECK_FALSE(a.low_statistics);

        auto other = small_scan();
        other.seed = 12;
        CHECK(chain_error_scan(other).points[0].mean_eps != a.points[0].mean_eps);
    }

    TEST_CASE("scan validation and low statistics") {
        auto c = small_scan();
        c.trials = 1;
        const auto r = chain_error_scan(c);
        CHECK(r.low_statistics);
        CHECK(r.points[0].stderr_eps == 0.0);

        c = small_scan();
        c.N_list = {3, 4, 4};
        CHECK_THROWS_AS(chain_error_scan(c), std::invalid_argument);
        c = small_scan();
        c.delta = 0.0;
        CHECK_THROWS_AS(chain_error_scan(c), std::invalid_argument);
        c = small_scan();
        c.trials = 0;
        CHECK_THROWS_AS(chain_error_scan(c), std::invalid_argument);
        c = small_scan();
        c.N_list = {3, 4, 13};
        CHECK_THROWS_AS(chain_error_scan(c), std::invalid_argument);
    }

    TEST_CASE("bus error does not depend on N") {
        const int sizes[] = {3, 9, 27, 81};
        const auto pts = bus_serial_error(sizes, 1e-3, 50, 5);
        REQUIRE(pts.size() == 4);
        for (const auto& p : pts) {
            CHECK(p.gates == 3);
            CHECK(p.mean_eps > 0.0);
            CHECK(std::abs(p.mean_eps / pts[0].mean_eps - 1.0) < 1e-8);
        }
        const auto zero = bus_serial_error(sizes, 0.0, 5, 5);
        for (const auto& p : zero) CHECK(p.mean_eps < 1e-12);
        CHECK_THROWS_AS(bus_serial_error(sizes, 1e-3, 0, 5), std::invalid_argument);
        CHECK_THROWS_AS(bus_serial_error(std::span<const int>{}, 1e-3, 5, 5), std::invalid_argument);
    }

    TEST_CASE("distribution names") {
        CHECK(parse_distribution("uniform") == ErrorDistribution::uniform);
        CHECK(to_string(parse_distribution("rademacher")) == "rademacher");
        CHECK_THROWS_AS(parse_distribution("gauss"), std::invalid_argument);
    }
}

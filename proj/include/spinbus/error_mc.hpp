// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file error_mc.hpp
 * @brief Monte Carlo propagation of coupling errors J -> J (1 + x delta).
 *
 * Each gate keeps its nominal duration while its coupling is off by a random
 * relative amount.  The error of a realization is the spectral norm of the
 * difference from the ideal product.  All Heisenberg gates conserve S_z, so
 * the norm is evaluated sector by sector.
 *
 * Chain trials draw from derive_seed(seed, N, trial).  Bus trials draw from
 * derive_seed(seed, kBusStream, trial) for every N, i.e. common random
 * numbers across bus sizes.
 */

#pragma once

#include "spinbus/spectral.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace spinbus {

enum class ErrorDistribution { rademacher, uniform };

std::string to_string(ErrorDistribution d);
ErrorDistribution parse_distribution(const std::string& s);

inline constexpr std::uint64_t kBusStream = 0xB05;

struct ErrorScanConfig {
    std::vector<int> N_list;
    double delta = 1e-3;
    int trials = 200;
    std::uint64_t seed = 1;
    ErrorDistribution distribution = ErrorDistribution::rademacher;

    void validate() const;
};

struct ScalingPoint {
    int N = 0;
    int gates = 0;
    double mean_eps = 0.0;
    double stderr_eps = 0.0;
};

struct ScalingResult {
    ErrorScanConfig config;
    std::vector<ScalingPoint> points;
    PowerLawFit fit;              ///< mean eps against gate count 2N-3
    bool low_statistics = false;  ///< trials < 2: no standard error available
};

/// ||U(couplings) - U(nominal)||_2 for the end-to-end SWAP chain on N qubits.
double chain_error(int N, std::span<const double> couplings);

/// One realization with every gate coupling multiplied by (1 + x_k delta).
double chain_error_sample(int N, double delta, std::mt19937_64& rng,
                          ErrorDistribution dist = ErrorDistribution::rademacher);

ScalingResult chain_error_scan(const ErrorScanConfig& config);

/// ||U_serial(perturbed) - U_serial(nominal)||_2 for one realization of the
/// effective three-gate protocol with J* = 1/sqrt(N).
double bus_error_sample(int N, double delta, std::mt19937_64& rng,
                        ErrorDistribution dist = ErrorDistribution::rademacher);

/// Mean bus error per N.  Throws ClaimViolation if max/min over N exceeds 1.05.
std::vector<ScalingPoint> bus_serial_error(std::span<const int> N_list, double delta, int trials,
                                           std::uint64_t seed,
                                           ErrorDistribution dist = ErrorDistribution::rademacher);

}  // namespace spinbus

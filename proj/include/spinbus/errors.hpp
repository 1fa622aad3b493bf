// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace spinbus {

/// Iterative method stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// A checked physical identity or bound did not hold numerically.
class ClaimViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spinbus

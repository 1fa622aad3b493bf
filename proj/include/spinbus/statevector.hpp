// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "spinbus/basis.hpp"

#include <Eigen/Core>

#include <complex>

namespace spinbus {

using cplx = std::complex<double>;

/// Complex amplitudes over a shared SpinBasis.
class Statevector {
public:
    Statevector(BasisPtr basis, Eigen::VectorXcd amplitudes);

    /// Computational basis state `c`; throws if `c` is outside the basis.
    static Statevector basis_state(BasisPtr basis, Config c);

    const SpinBasis& basis() const noexcept { return *basis_; }
    const BasisPtr& basis_ptr() const noexcept { return basis_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }

    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    Eigen::VectorXcd& amplitudes() noexcept { return amps_; }

    cplx amplitude(Config c) const;
    double norm() const { return amps_.norm(); }
    void normalize();

    /// Same configurations expressed in `target` (which must contain every
    /// nonzero amplitude of this state).
    Statevector embed(BasisPtr target) const;

private:
    BasisPtr basis_;
    Eigen::VectorXcd amps_;
};

/// <a|b>
cplx inner(const Statevector& a, const Statevector& b);

/// |<a|b>|^2
double overlap_probability(const Statevector& a, const Statevector& b);

}  // namespace spinbus

// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinbus {

namespace {

// Gosper's hack: next integer with the same popcount.
Config next_same_popcount(Config v) {
    const Config t = v | (v - 1);
    return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

int two_sz_of(Config c, int n_sites) noexcept {
    return 2 * std::popcount(c) - n_sites;
}

SpinBasis::SpinBasis(int n_sites, std::optional<int> two_sz)
    : n_sites_(n_sites), two_sz_(two_sz) {
    if (n_sites < 1 || n_sites > kMaxSites) {
        throw std::invalid_argument("SpinBasis: n_sites must be in [1, " +
                                    std::to_string(kMaxSites) + "]");
    }
    const Config end = Config{1} << n_sites;
    if (!two_sz) {
        states_.resize(static_cast<std::size_t>(end));
        for (Config c = 0; c < end; ++c) states_[c] = c;
        return;
    }
    if (std::abs(*two_sz) > n_sites || (*two_sz + n_sites) % 2 != 0) {
        throw std::invalid_argument("SpinBasis: S_z sector incompatible with site count");
    }
    const int n_up = (*two_sz + n_sites) / 2;
    if (n_up == 0) {
        states_.push_back(0);
        return;
    }
    for (Config c = (Config{1} << n_up) - 1; c < end; c = next_same_popcount(c)) {
        states_.push_back(c);
    }
}

std::optional<double> SpinBasis::sector() const noexcept {
    if (!two_sz_) return std::nullopt;
    return 0.5 * *two_sz_;
}

std::optional<std::size_t> SpinBasis::index_of(Config c) const noexcept {
    if (!two_sz_) {
        if (c < states_.size()) return static_cast<std::size_t>(c);
        return std::nullopt;
    }
    auto it = std::lower_bound(states_.begin(), states_.end(), c);
    if (it == states_.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

SpinBasis build_basis(int n_sites, std::optional<double> sector) {
    if (!sector) return SpinBasis(n_sites, std::nullopt);
    const double twice = 2.0 * *sector;
    const double rounded = std::round(twice);
    if (std::abs(twice - rounded) > 1e-9) {
        throw std::invalid_argument("build_basis: sector must be a half-integer");
    }
    return SpinBasis(n_sites, static_cast<int>(rounded));
}

BasisPtr make_basis(int n_sites, std::optional<double> sector) {
    return std::make_shared<const SpinBasis>(build_basis(n_sites, sector));
}

}  // namespace spinbus

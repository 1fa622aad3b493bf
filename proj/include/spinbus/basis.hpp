// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file basis.hpp
 * @brief Bit-encoded computational basis for a register of spin-1/2 sites.
 *
 * Bit k of a configuration is site k (0-based), 1 = spin up.  A basis may be
 * restricted to a single total-S_z sector; states are kept sorted so lookups
 * are a binary search.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace spinbus {

using Config = std::uint64_t;

/// Largest register the 64-bit encoding supports.
inline constexpr int kMaxSites = 62;

class SpinBasis {
public:
    /// `two_sz` is twice the total S_z (so it is always an integer).
    SpinBasis(int n_sites, std::optional<int> two_sz);

    int n_sites() const noexcept { return n_sites_; }
    std::optional<int> two_sz() const noexcept { return two_sz_; }
    std::optional<double> sector() const noexcept;
    std::size_t dim() const noexcept { return states_.size(); }
    bool full() const noexcept { return !two_sz_.has_value(); }

    Config state(std::size_t i) const { return states_[i]; }
    std::span<const Config> states() const noexcept { return states_; }

    /// Ordinal of `c`, or nullopt if it is not in this basis.
    std::optional<std::size_t> index_of(Config c) const noexcept;

    bool operator==(const SpinBasis& other) const noexcept {
        return n_sites_ == other.n_sites_ && two_sz_ == other.two_sz_;
    }

private:
    int n_sites_;
    std::optional<int> two_sz_;
    std::vector<Config> states_;
};

using BasisPtr = std::shared_ptr<const SpinBasis>;

/// Builds a basis on `n_sites` sites, optionally restricted to total S_z = `sector`.
/// Throws std::invalid_argument if the sector is not reachable.
SpinBasis build_basis(int n_sites, std::optional<double> sector = std::nullopt);
BasisPtr make_basis(int n_sites, std::optional<double> sector = std::nullopt);

/// Twice the total S_z of a configuration on `n_sites` sites.
int two_sz_of(Config c, int n_sites) noexcept;

inline bool bit(Config c, int site) noexcept { return ((c >> site) & 1U) != 0; }

}  // namespace spinbus

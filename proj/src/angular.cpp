// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/angular.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace spinbus {

namespace {

constexpr int kMaxFactorial = 170;

double factorial(int k) {
    static const auto table = [] {
        std::array<double, kMaxFactorial + 1> f{};
        f[0] = 1.0;
        for (int i = 1; i <= kMaxFactorial; ++i) f[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i - 1)] * i;
        return f;
    }();
    if (k < 0 || k > kMaxFactorial) throw std::out_of_range("factorial: argument outside table");
    return table[static_cast<std::size_t>(k)];
}

bool valid_projection(int tj, int tm) { return tj >= 0 && std::abs(tm) <= tj && (tj - tm) % 2 == 0; }

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

int twice(double j) {
    const double t = 2.0 * j;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) throw std::invalid_argument("angular momentum must be a half-integer");
    return static_cast<int>(r);
}

double clebsch_gordan_2j(int tj1, int tm1, int tj2, int tm2, int tJ, int tM) {
    if (!valid_projection(tj1, tm1) || !valid_projection(tj2, tm2) || !valid_projection(tJ, tM)) return 0.0;
    if (tm1 + tm2 != tM) return 0.0;
    if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2 != 0) return 0.0;

    // Racah closed form; every bracket below is an integer.
    const int a = (tJ + tj1 - tj2) / 2, b = (tJ - tj1 + tj2) / 2, c = (tj1 + tj2 - tJ) / 2;
    const int s = (tj1 + tj2 + tJ) / 2 + 1;
    const double pre = std::sqrt((tJ + 1) * factorial(a) * factorial(b) * factorial(c) / factorial(s));
    const double proj = std::sqrt(factorial((tJ + tM) / 2) * factorial((tJ - tM) / 2) *
                                  factorial((tj1 - tm1) / 2) * factorial((tj1 + tm1) / 2) *
                                  factorial((tj2 - tm2) / 2) * factorial((tj2 + tm2) / 2));
    const int k1 = (tJ - tj2 + tm1) / 2;  // J - j2 + m1
    const int k2 = (tJ - tj1 - tm2) / 2;  // J - j1 - m2
    const int u1 = c, u2 = (tj1 - tm1) / 2, u3 = (tj2 + tm2) / 2;
    double sum = 0.0;
    for (int k = std::max({0, -k1, -k2}); k <= std::min({u1, u2, u3}); ++k) {
        const double den = factorial(k) * factorial(u1 - k) * factorial(u2 - k) * factorial(u3 - k) *
                           factorial(k1 + k) * factorial(k2 + k);
        sum += (k % 2 == 0 ? 1.0 : -1.0) / den;
    }
    return pre * proj * sum;
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    return clebsch_gordan_2j(twice(j1), twice(m1), twice(j2), twice(m2), twice(J), twice(M));
}

long multiplicity(int n, int two_j) {
    if (n < 0 || two_j < 0 || two_j > n || (n - two_j) % 2 != 0) return 0;
    const int k = (n - two_j) / 2;
    return binomial(n, k) - binomial(n, k - 1);
}

namespace {

struct Multiplet {
    std::vector<int> path;
    int two_j = 0;
    std::vector<Eigen::VectorXd> by_m;  ///< index (two_m + two_j) / 2
};

}  // namespace

std::vector<AngularBasisElement> total_spin_basis(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("total_spin_basis: n must be in [1, 20]");
    Eigen::VectorXd down = Eigen::VectorXd::Zero(2), up = Eigen::VectorXd::Zero(2);
    down[0] = 1.0;
    up[1] = 1.0;
    std::vector<Multiplet> level{{{1}, 1, {down, up}}};

    for (int k = 1; k < n; ++k) {
        const Eigen::Index old_dim = Eigen::Index{1} << k;
        std::vector<Multiplet> next;
        for (const auto& mp : level) {
            for (int tJ : {mp.two_j - 1, mp.two_j + 1}) {
                if (tJ < 0) continue;
                Multiplet child{mp.path, tJ, {}};
                child.path.push_back(tJ);
                for (int tM = -tJ; tM <= tJ; tM += 2) {
                    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * old_dim);
                    for (int tm2 : {-1, 1}) {
                        const int tm1 = tM - tm2;
                        if (std::abs(tm1) > mp.two_j) continue;
                        const double cg = clebsch_gordan_2j(mp.two_j, tm1, 1, tm2, tJ, tM);
                        if (cg == 0.0) continue;
                        const auto& parent = mp.by_m[static_cast<std::size_t>((tm1 + mp.two_j) / 2)];
                        v.segment(tm2 > 0 ? old_dim : 0, old_dim) += cg * parent;
                    }
                    child.by_m.push_back(std::move(v));
                }
                next.push_back(std::move(child));
            }
        }
        level = std::move(next);
    }

    std::vector<AngularBasisElement> out;
    for (int tj = n % 2; tj <= n; tj += 2) {
        int lambda = 0;
        for (const auto& mp : level) {
            if (mp.two_j != tj) continue;
            for (int tm = -tj; tm <= tj; tm += 2) {
                out.push_back({tj, tm, lambda, mp.path, mp.by_m[static_cast<std::size_t>((tm + tj) / 2)]});
            }
            ++lambda;
        }
    }
    return out;
}

Eigen::VectorXd with_bus(int bus_state, const Eigen::VectorXd& qubits) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * qubits.size());
    for (Eigen::Index q = 0; q < qubits.size(); ++q) v[2 * q + bus_state] = qubits[q];
    return v;
}

BlockMap block_map(int n) {
    const auto basis = total_spin_basis(n);
    BlockMap map{n, {}};
    for (std::size_t start = 0; start < basis.size();) {
        const int tj = basis[start].two_j;
        const std::size_t count = static_cast<std::size_t>(tj) + 1;
        auto at = [&](int tm) -> const Eigen::VectorXd& {
            return basis[start + static_cast<std::size_t>((tm + tj) / 2)].vector;
        };
        const int lambda = basis[start].lambda;
        map.blocks.push_back({{with_bus(1, at(tj))}, tj, lambda, tj});
        map.blocks.push_back({{with_bus(0, at(-tj))}, tj, lambda, -tj});
        for (int tm = -tj; tm < tj; tm += 2) {
            map.blocks.push_back({{with_bus(0, at(tm + 2)), with_bus(1, at(tm))}, tj, lambda, tm});
        }
        start += count;
    }
    return map;
}

Eigen::MatrixXd BlockMap::basis_matrix() const {
    std::size_t cols = 0;
    for (const auto& b : blocks) cols += b.states.size();
    const Eigen::Index d = Eigen::Index{2} << n;
    Eigen::MatrixXd m(d, static_cast<Eigen::Index>(cols));
    Eigen::Index c = 0;
    for (const auto& b : blocks)
        for (const auto& s : b.states) m.col(c++) = s;
    return m;
}

}  // namespace spinbus

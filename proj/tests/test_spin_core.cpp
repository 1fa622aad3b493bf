// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "spinbus/basis.hpp"
#include "spinbus/hamiltonian.hpp"
#include "spinbus/linalg.hpp"
#include "spinbus/statevector.hpp"

#include <doctest.h>

#include <bit>
#include <random>
#include <set>

using namespace spinbus;

namespace {

Eigen::MatrixXcd embed_full(const SparseHamiltonian& H) { return H.to_dense().cast<cplx>(); }

}  // namespace

TEST_SUITE("spin-core") {
    TEST_CASE("basis dimensions") {
        CHECK(build_basis(2).dim() == 4);
        CHECK(build_basis(3, 0.5).dim() == 3);
        CHECK(build_basis(7, 0.5).dim() == 35);
        CHECK(build_basis(10, -1.0).dim() == 210);
    }

    TEST_CASE("basis ordering and sector membership") {
        for (int n = 1; n <= 9; ++n) {
            for (int two_sz = -n; two_sz <= n; two_sz += 2) {
                const auto b = build_basis(n, two_sz / 2.0);
                for (std::size_t i = 0; i < b.dim(); ++i) {
                    CHECK(two_sz_of(b.state(i), n) == two_sz);
                    if (i > 0) CHECK(b.state(i) > b.state(i - 1));
                    CHECK(b.index_of(b.state(i)) == i);
                }
            }
        }
        const auto full = build_basis(5);
        for (std::size_t i = 0; i < full.dim(); ++i) CHECK(full.state(i) == i);
        CHECK_FALSE(build_basis(5, 0.5).index_of(0).has_value());
    }

    TEST_CASE("basis rejects bad sectors") {
        CHECK_THROWS_AS(build_basis(3, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(build_basis(3, 2.5), std::invalid_argument);
        CHECK_THROWS_AS(build_basis(4, 0.25), std::invalid_argument);
        CHECK_THROWS_AS(build_basis(0), std::invalid_argument);
    }

    TEST_CASE("chain spec validation") {
        CHECK_NOTHROW((ChainSpec{7, 1.0, {}, 0.0}.validate()));
        CHECK_THROWS_AS((ChainSpec{4, 1.0, {}, 0.0}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((ChainSpec{3, -1.0, {}, 0.0}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((ChainSpec{3, 1.0, {1.0}, 0.0}.validate()), std::invalid_argument);
    }

    TEST_CASE("Hamiltonian matches Kronecker-product oracle") {
        for (int n = 1; n <= 6; ++n) {
            const auto full = build_basis(n);
            for (double B : {0.0, 0.37}) {
                const ChainSpec spec{n, 1.3, {}, B};
                const auto H = heisenberg_hamiltonian(spec, full);
                CHECK((embed_full(H) - oracle::chain(n, n, 1.3, B)).cwiseAbs().maxCoeff() < 1e-14);
            }
        }
        const std::vector<double> bonds{0.5, 1.5, 0.75};
        const auto H = heisenberg_hamiltonian(ChainSpec{4, 1.0, bonds, 0.0}, build_basis(4));
        oracle::Mat ref = oracle::Mat::Zero(16, 16);
        for (int i = 0; i < 3; ++i) ref += bonds[static_cast<std::size_t>(i)] * oracle::dot(4, i, i + 1);
        CHECK((embed_full(H) - ref).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("qubit coupling matches oracle") {
        const int N = 3;
        const auto full = build_basis(N + 2);
        const std::vector<QubitCoupling> cs{{1, 0.3, {}}, {3, 0.2, {}}};
        const auto H = couple_qubits(heisenberg_hamiltonian(ChainSpec{N, 1.0, {}, 0.1}, full), full, N, cs, 0.0);
        oracle::Mat ref = oracle::chain(N, N + 2, 1.0, 0.1) + 0.3 * oracle::dot(N + 2, N, 0) +
                          0.2 * oracle::dot(N + 2, N + 1, 2);
        CHECK((embed_full(H) - ref).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("sector Hamiltonian is the oracle block") {
        const int n = 6;
        const auto ref = oracle::chain(n, n, 1.0, 0.2);
        for (int two_sz = -n; two_sz <= n; two_sz += 2) {
            const auto b = build_basis(n, two_sz / 2.0);
            const auto H = heisenberg_hamiltonian(ChainSpec{n, 1.0, {}, 0.2}, b);
            const auto D = H.to_dense();
            for (std::size_t i = 0; i < b.dim(); ++i)
                for (std::size_t j = 0; j < b.dim(); ++j)
                    CHECK(std::abs(D(i, j) - ref(b.state(i), b.state(j)).real()) < 1e-14);
        }
    }

    TEST_CASE("Hermitian storage and S_z conservation") {
        const std::vector<QubitCoupling> cs{{1, 0.3, {}}, {5, 0.1, {}}};
        const auto base = build_basis(9);
        const auto H = couple_qubits(heisenberg_hamiltonian(ChainSpec{7, 1.0, {}, 0.05}, base), base, 7, cs, 0.0);
        const auto D = H.to_dense();
        CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
        for (const auto& e : H.entries()) {
            CHECK(std::popcount(base.state(e.row)) == std::popcount(base.state(e.col)));
        }
    }

    TEST_CASE("coalesced entries are unique and in range") {
        const auto b = build_basis(5, 0.5);
        const std::vector<ExchangeTerm> terms{{0, 1, 1.0}, {0, 1, 0.5}, {1, 2, 1.0}, {2, 1, -1.0}};
        const auto H = exchange_operator(b, terms, 0.0);
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& e : H.entries()) {
            CHECK(e.row < H.dim());
            CHECK(e.col < H.dim());
            CHECK(e.value != 0.0);
            CHECK(seen.insert({e.row, e.col}).second);
        }
    }

    TEST_CASE("small chain spectra") {
        const auto two = exchange_operator(build_basis(2), std::vector<ExchangeTerm>{{0, 1, 2.0}}, 0.0);
        const auto e2 = oracle::eigenvalues(embed_full(two));
        CHECK(e2[0] == doctest::Approx(-1.5).epsilon(1e-14));
        for (int i = 1; i < 4; ++i) CHECK(e2[i] == doctest::Approx(0.5).epsilon(1e-14));

        const auto three = heisenberg_hamiltonian(ChainSpec{3, 1.0, {}, 0.0}, build_basis(3));
        const auto e3 = oracle::eigenvalues(embed_full(three));
        const double expected[] = {-1, -1, 0, 0, 0.5, 0.5, 0.5, 0.5};
        for (int i = 0; i < 8; ++i) CHECK(std::abs(e3[i] - expected[i]) < 1e-13);
    }

    TEST_CASE("Zeeman term splits the N=7 doublet by B") {
        const double B = 0.03;
        const ChainSpec spec{7, 1.0, {}, B};
        const auto up = heisenberg_hamiltonian(spec, build_basis(7, 0.5));
        const auto down = heisenberg_hamiltonian(spec, build_basis(7, -0.5));
        const double eu = oracle::eigenvalues(embed_full(up))[0];
        const double ed = oracle::eigenvalues(embed_full(down))[0];
        CHECK(std::abs((eu - ed) - B) < 1e-12);
    }

    TEST_CASE("coupling edge cases leave H unchanged") {
        const auto b = build_basis(4);
        const auto H = heisenberg_hamiltonian(ChainSpec{3, 1.0, {}, 0.0}, b);
        const std::vector<QubitCoupling> zero{{2, 0.0, {}}};
        CHECK((couple_qubits(H, b, 3, zero, 0.0).to_dense() - H.to_dense()).cwiseAbs().maxCoeff() == 0.0);
        const auto b3 = build_basis(3);
        const auto H3 = heisenberg_hamiltonian(ChainSpec{3, 1.0, {}, 0.0}, b3);
        CHECK((couple_qubits(H3, b3, 3, {}, 0.0).to_dense() - H3.to_dense()).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("coupling schedules and node errors") {
        QubitCoupling q{1, 0.5, {{0.0, 1.0}, {2.0, 3.0}}};
        CHECK(q.active(0.0));
        CHECK(q.active(0.5));
        CHECK_FALSE(q.active(1.0));
        CHECK_FALSE(q.active(1.5));
        CHECK(q.active(2.5));
        CHECK_NOTHROW(q.validate(3));
        CHECK_THROWS_AS((QubitCoupling{4, 0.5, {}}.validate(3)), std::out_of_range);
        CHECK_THROWS_AS((QubitCoupling{0, 0.5, {}}.validate(3)), std::out_of_range);
        CHECK_THROWS_AS((QubitCoupling{1, 0.5, {{1.0, 2.0}, {1.5, 3.0}}}.validate(3)), std::invalid_argument);

        const auto b = build_basis(4);
        const auto H = heisenberg_hamiltonian(ChainSpec{3, 1.0, {}, 0.0}, b);
        const std::vector<QubitCoupling> off{{1, 0.5, {{2.0, 3.0}}}};
        CHECK((couple_qubits(H, b, 3, off, 0.0).to_dense() - H.to_dense()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((couple_qubits(H, b, 3, off, 2.5).to_dense() - H.to_dense()).cwiseAbs().maxCoeff() > 0.1);
        const std::vector<QubitCoupling> bad{{5, 0.5, {}}};
        CHECK_THROWS_AS(couple_qubits(H, b, 3, bad, 0.0), std::out_of_range);
    }

    TEST_CASE("site-count mismatch is an error") {
        CHECK_THROWS_AS((heisenberg_hamiltonian(ChainSpec{5, 1.0, {}, 0.0}, build_basis(3))), std::invalid_argument);
    }

    TEST_CASE("apply is the sparse mat-vec") {
        const auto b = make_basis(7, 0.5);
        const auto H = heisenberg_hamiltonian(ChainSpec{7, 1.0, {}, 0.0}, *b);
        std::mt19937_64 rng(7);
        const Statevector v(b, random_state(static_cast<Eigen::Index>(b->dim()), rng));
        const auto Hv = apply(H, v);
        const cplx e = inner(v, Hv);
        CHECK(std::abs(e.imag()) < 1e-12);
        const Eigen::VectorXcd ref = H.to_dense().cast<cplx>() * v.amplitudes();
        CHECK((Hv.amplitudes() - ref).norm() < 1e-12);

        const SparseHamiltonian zero(b->dim(), {});
        CHECK(apply(zero, v).amplitudes().norm() == 0.0);
        const Statevector wrong(make_basis(3), Eigen::VectorXcd::Ones(8));
        CHECK_THROWS_AS(apply(H, wrong), std::invalid_argument);

        const auto H3 = heisenberg_hamiltonian(ChainSpec{3, 1.0, {}, 0.0}, *make_basis(3, 0.5));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H3.to_dense());
        const Statevector ev(make_basis(3, 0.5), es.eigenvectors().col(0).cast<cplx>());
        CHECK((apply(H3, ev).amplitudes() - es.eigenvalues()[0] * ev.amplitudes()).norm() < 1e-12);
    }

    TEST_CASE("total spin and lowering operators") {
        const int n = 5;
        const auto b = build_basis(n);
        CHECK((total_spin_squared(b).to_dense().cast<cplx>() - oracle::total_s2(n)).cwiseAbs().maxCoeff() < 1e-13);
        oracle::Mat sum = oracle::Mat::Zero(32, 32);
        for (int k = 0; k < n; ++k) sum += sz_operator(b, k).to_dense().cast<cplx>();
        CHECK((sum - oracle::total_sz(n)).cwiseAbs().maxCoeff() < 1e-14);

        const auto up = build_basis(3, 1.5);
        const auto mid = build_basis(3, 0.5);
        const Eigen::VectorXcd lowered = apply_lowering(up, mid, Eigen::VectorXcd::Ones(1));
        CHECK(lowered.size() == 3);
        for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(lowered[i] - 1.0) < 1e-15);
    }

    TEST_CASE("statevector helpers") {
        const auto b = make_basis(3);
        const auto s = Statevector::basis_state(b, 5);
        CHECK(s.amplitude(5) == cplx(1.0));
        CHECK(s.amplitude(4) == cplx(0.0));
        const auto sector = make_basis(3, 0.5);
        const auto e = s.embed(sector);
        CHECK(e.amplitude(5) == cplx(1.0));
        CHECK_THROWS(Statevector::basis_state(sector, 0));
        CHECK(overlap_probability(s, e.embed(b)) == doctest::Approx(1.0));
    }
}

#include <doctest.h>

#include <random>

#include "vsi/spin_algebra.hpp"

using namespace vsi;

namespace {

double maxabs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

CMat random_matrix(int r, int c, std::mt19937& g) {
    std::normal_distribution<double> n;
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = cplx(n(g), n(g));
    return m;
}

} // namespace

TEST_CASE("spin 3/2 sz is diag(3/2, 1/2, -1/2, -3/2)") {
    const auto op = build_spin_operators(1.5);
    CMat expect = CMat::Zero(4, 4);
    expect.diagonal() << 1.5, 0.5, -0.5, -1.5;
    CHECK(maxabs(op.sz - expect) == 0.0);
}

TEST_CASE("spin 1/2 sx is Pauli x over two") {
    const auto op = build_spin_operators(0.5);
    CHECK(op.sx(0, 0) == cplx(0, 0));
    CHECK(op.sx(1, 1) == cplx(0, 0));
    CHECK(op.sx(0, 1) == cplx(0.5, 0));
    CHECK(op.sx(1, 0) == cplx(0.5, 0));
}

TEST_CASE("ladder element <1/2|S+|-1/2> = 2 for spin 3/2") {
    const auto op = build_spin_operators(1.5);
    // rows/cols: 0 -> 3/2, 1 -> 1/2, 2 -> -1/2, 3 -> -3/2
    CHECK(std::abs(op.s_plus(1, 2) - cplx(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(op.s_plus(0, 1) - cplx(std::sqrt(3.0), 0.0)) < 1e-15);
    CHECK(std::abs(op.s_plus(2, 3) - cplx(std::sqrt(3.0), 0.0)) < 1e-15);
}

TEST_CASE("angular momentum algebra holds for s = 1/2 and 3/2") {
    for (double s : {0.5, 1.5}) {
        CAPTURE(s);
        const auto op = build_spin_operators(s);
        const cplx i(0, 1);
        CHECK(maxabs(op.sx * op.sy - op.sy * op.sx - i * op.sz) < 1e-12);
        CHECK(maxabs(op.sy * op.sz - op.sz * op.sy - i * op.sx) < 1e-12);
        CHECK(maxabs(op.sz * op.sx - op.sx * op.sz - i * op.sy) < 1e-12);
        const CMat casimir = op.sx * op.sx + op.sy * op.sy + op.sz * op.sz;
        CHECK(maxabs(casimir - s * (s + 1) * CMat::Identity(op.dim(), op.dim())) < 1e-12);
        CHECK(maxabs(op.s_plus - (op.sx + i * op.sy)) < 1e-12);
        CHECK(maxabs(op.s_minus - op.s_plus.adjoint()) < 1e-12);
        CHECK(maxabs(op.sx - op.sx.adjoint()) == 0.0);
        CHECK(maxabs(op.sy - op.sy.adjoint()) == 0.0);
    }
}

TEST_CASE("unsupported spin values are rejected") {
    CHECK_THROWS_AS(build_spin_operators(1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_spin_operators(2.5), std::invalid_argument);
    CHECK_THROWS_AS(build_spin_operators(-0.5), std::invalid_argument);
}

TEST_CASE("kron examples") {
    CHECK(maxabs(kron(CMat::Identity(4, 4), CMat::Identity(2, 2)) - CMat::Identity(8, 8)) == 0.0);

    CMat d = CMat::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -7.0;
    CMat expect = CMat::Zero(4, 4);
    expect.diagonal() << 3.0, 3.0, -7.0, -7.0;
    CHECK(maxabs(kron(d, CMat::Identity(2, 2)) - expect) == 0.0);

    const CMat k = kron(build_spin_operators(1.5).sz, CMat::Identity(2, 2));
    const double diag[] = {1.5, 1.5, 0.5, 0.5, -0.5, -0.5, -1.5, -1.5};
    for (int i = 0; i < 8; ++i) CHECK(k(i, i) == cplx(diag[i], 0));
}

TEST_CASE("kron is associative on random matrices") {
    std::mt19937 g(7);
    for (int trial = 0; trial < 10; ++trial) {
        const CMat a = random_matrix(2, 3, g), b = random_matrix(3, 2, g), c = random_matrix(2, 2, g);
        CHECK(maxabs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
    }
}

TEST_CASE("basis indices follow electron-major, nucleus-minor ordering") {
    CHECK(basis_index(Block::GS, 1.5, 0) == 0);
    CHECK(basis_index(Block::GS, 1.5, 1) == 1);
    CHECK(basis_index(Block::GS, -1.5, 1) == 7);
    CHECK(basis_index(Block::ES, 1.5, 0) == 8);
    CHECK(basis_index(Block::ES, -0.5, 0) == 12);
    CHECK(basis_index(Block::MS, 0.0, 0) == 16);
    CHECK(basis_index(Block::MS, 0.0, 1) == 17);
    CHECK(local_index(0.5, 1) == 3);
    CHECK(basis_label(5) == "GS|-1/2,b");
    CHECK(basis_label(17) == "MS|b");
}

TEST_CASE("projector examples and identities") {
    const CMat pe_half = projector(Block::ES, SpinGroup::Half);
    CHECK(std::abs(pe_half.trace() - cplx(4.0, 0.0)) < 1e-15);

    const CMat pg_three = projector(Block::GS, SpinGroup::ThreeHalves);
    const CMat pg_half = projector(Block::GS, SpinGroup::Half);
    CHECK(maxabs(pg_three * pg_half) == 0.0);

    CMat ms = CMat::Zero(kFullDim, kFullDim);
    ms(16, 16) = ms(17, 17) = 1.0;
    const CMat total = pg_three + pg_half + projector(Block::ES, SpinGroup::ThreeHalves) + pe_half + ms;
    CHECK(maxabs(total - CMat::Identity(kFullDim, kFullDim)) == 0.0);

    for (const CMat& p : {pg_three, pg_half, pe_half}) {
        CHECK(maxabs(p * p - p) == 0.0);
        CHECK(maxabs(p - p.adjoint()) == 0.0);
    }
    // single-Sz projectors refine the group projectors
    CHECK(maxabs(projector(Block::GS, 0.5) + projector(Block::GS, -0.5) - pg_half) == 0.0);
    CHECK_THROWS(projector(Block::MS, SpinGroup::Half));
}

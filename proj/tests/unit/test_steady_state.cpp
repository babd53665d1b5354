#include <doctest.h>

#include <random>

#include "vsi/errors.hpp"
#include "vsi/steady_state.hpp"

using namespace vsi;

namespace {

double maxabs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

CMat two_level(double p, double k) {
    CMat j_up = CMat::Zero(2, 2), j_dn = CMat::Zero(2, 2);
    j_up(1, 0) = std::sqrt(p);
    j_dn(0, 1) = std::sqrt(k);
    return assemble_liouvillian(CMat::Zero(2, 2), std::vector<CMat>{j_up, j_dn});
}

double population(const CMat& rho, Block b, double sz) {
    return rho(basis_index(b, sz, 0), basis_index(b, sz, 0)).real() +
           rho(basis_index(b, sz, 1), basis_index(b, sz, 1)).real();
}

CMat mixed() { return CMat::Identity(kFullDim, kFullDim) / double(kFullDim); }

} // namespace

TEST_CASE("two-level pump/decay balance") {
    const double p = 0.3, k = 0.05;
    const SteadyState s = solve_steady_state(two_level(p, k));
    CHECK(s.rho(0, 0).real() == doctest::Approx(k / (p + k)).epsilon(1e-13));
    CHECK(s.rho(1, 1).real() == doctest::Approx(p / (p + k)).epsilon(1e-13));
}

TEST_CASE("default cycle at zero field polarizes into +-1/2, confirmed by propagation") {
    SpinSystem sys;
    sys.theta_rad = 0.0;
    sys.g_perp_3 = 0.0;
    const RateScheme r;
    const BlockHamiltonian h = lab_block_hamiltonian(sys, 0.0, false);
    const auto jumps = build_jump_operators(r);
    const SteadyState s = solve_cycle(h, jumps);
    const double half = population(s.rho, Block::GS, 0.5) + population(s.rho, Block::GS, -0.5);
    const double three = population(s.rho, Block::GS, 1.5) + population(s.rho, Block::GS, -1.5);
    CHECK(half > three);

    // t = 10 / smallest rate
    const CMat l = assemble_liouvillian(h, jumps);
    const PropagationResult pr = propagate(l, mixed(), 10.0 / 0.01, max_stable_step(l));
    const double half_t = population(pr.rho, Block::GS, 0.5) + population(pr.rho, Block::GS, -0.5);
    const double three_t = population(pr.rho, Block::GS, 1.5) + population(pr.rho, Block::GS, -1.5);
    CHECK(half_t > three_t);
}

TEST_CASE("symmetric rates without ISC return: equal populations in GS and in ES") {
    const RateScheme r{0.01, 0.07, 0.07, 0.03, 0.03, 0.0};
    SUBCASE("without hyperfine the steady state exists and is symmetric") {
        SpinSystem sys;
        sys.hfc_gs_mT.setZero();
        sys.hfc_es_mT.setZero();
        const SteadyState s = solve_cycle(lab_block_hamiltonian(sys, 6.0), build_jump_operators(r));
        for (Block b : {Block::GS, Block::ES}) {
            const double p0 = population(s.rho, b, 1.5);
            for (double sz : {0.5, -0.5, -1.5}) CHECK(std::abs(population(s.rho, b, sz) - p0) < 1e-12);
        }
    }
    SUBCASE("with hyperfine the metastable trap leaves the nuclear split undetermined") {
        SpinSystem sys;
        CHECK_THROWS_AS(solve_cycle(lab_block_hamiltonian(sys, 6.0), build_jump_operators(r)), SingularSystem);
    }
}

TEST_CASE("propagating with L = 0 returns rho0 exactly") {
    std::mt19937 g(1);
    std::normal_distribution<double> n;
    CMat rho = CMat::Zero(kFullDim, kFullDim);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j <= i; ++j) {
            rho(i, j) = cplx(n(g), i == j ? 0.0 : n(g));
            rho(j, i) = std::conj(rho(i, j));
        }
    rho(17, 17) = 1.0;
    const PropagationResult pr = propagate(CMat::Zero(324, 324), rho, 100.0, 1.0);
    CHECK(maxabs(pr.rho - rho) == 0.0);
}

TEST_CASE("two-level propagation converges to the linear solution") {
    const double p = 0.3, k = 0.05;
    const CMat l = two_level(p, k);
    CMat rho0 = CMat::Zero(2, 2);
    rho0(0, 0) = 1.0;
    const PropagationResult pr = propagate(l, rho0, 20.0 / (p + k), max_stable_step(l));
    const SteadyState s = solve_steady_state(l);
    CHECK(maxabs(pr.rho - s.rho) < 1e-8);
    // pure exponential approach: population of |2> follows p/(p+k) (1 - e^{-(p+k)t})
    const double t = 7.0;
    const PropagationResult pt = propagate(l, rho0, t, max_stable_step(l) / 64.0);
    CHECK(pt.rho(1, 1).real() == doctest::Approx(p / (p + k) * (1 - std::exp(-(p + k) * t))).epsilon(1e-9));
}

TEST_CASE("full system at 5 mT: propagation to 2000 ns matches the steady state to 1e-6") {
    SpinSystem sys;
    const RateScheme r;
    const BlockHamiltonian h = lab_block_hamiltonian(sys, 5.0);
    const auto jumps = build_jump_operators(r);
    const CMat l = assemble_liouvillian(h, jumps);
    const SteadyState s = solve_cycle(h, jumps);
    const PropagationResult pr = propagate(l, mixed(), 2000.0, max_stable_step(l));
    CHECK(maxabs(pr.rho - s.rho) < 1e-6);
}

TEST_CASE("full system at 5 mT: propagation well past the slowest relaxation matches the steady state") {
    SpinSystem sys;
    const RateScheme r;
    const BlockHamiltonian h = lab_block_hamiltonian(sys, 5.0);
    const auto jumps = build_jump_operators(r);
    const CMat l = assemble_liouvillian(h, jumps);
    const SteadyState s = solve_cycle(h, jumps);
    Eigen::ComplexEigenSolver<CMat> es(l, false);
    double gap = 1e300;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double re = -es.eigenvalues()(i).real();
        if (re > 1e-9) gap = std::min(gap, re);
    }
    MESSAGE("slowest relaxation rate " << gap << " /ns");
    // The slowest mode is far below the smallest transition rate.
    CHECK(gap < 1e-3);
    const PropagationResult pr = propagate(l, mixed(), 40.0 / gap, max_stable_step(l));
    CHECK(maxabs(pr.rho - s.rho) < 1e-6);
    const PropagationResult late = propagate(l, mixed(), 1e16, max_stable_step(l));
    CHECK(maxabs(late.rho - s.rho) < 1e-6);
    CHECK(late.trace_drift < 1e-10);
}

TEST_CASE("randomized draws: steady state is a valid density matrix and matches propagation") {
    std::mt19937 g(2024);
    std::uniform_real_distribution<double> lu(std::log(1e-3), std::log(1.0)), ub(0.0, 20.0);
    for (int draw = 0; draw < 6; ++draw) {
        SpinSystem sys;
        sys.theta_rad = (draw % 2) ? 5.0 * std::numbers::pi / 180 : 0.0;
        RateScheme r{std::exp(lu(g)), std::exp(lu(g)), std::exp(lu(g)),
                     std::exp(lu(g)), std::exp(lu(g)), std::exp(lu(g))};
        const double b = ub(g);
        CAPTURE(draw);
        CAPTURE(b);
        const BlockHamiltonian h = lab_block_hamiltonian(sys, b);
        const auto jumps = build_jump_operators(r);
        const SteadyState s = solve_cycle(h, jumps);
        CHECK(s.diag.residual_inf < 1e-10);
        CHECK(std::abs(s.rho.trace() - cplx(1, 0)) < 1e-10);
        CHECK(maxabs(s.rho - s.rho.adjoint()) < 1e-10);
        CHECK(s.diag.min_eigenvalue >= -1e-8);
        CHECK(maxabs(s.rho.block(0, 8, 8, 10)) < 1e-12); // no GS/ES/MS coherences
        const CMat l = assemble_liouvillian(h, jumps);
        const PropagationResult pr = propagate(l, mixed(), 1e16, max_stable_step(l));
        CHECK(maxabs(pr.rho - s.rho) < 1e-6);
    }
}

TEST_CASE("the replaced row is a free choice") {
    SpinSystem sys;
    const BlockHamiltonian h = lab_block_hamiltonian(sys, 11.0);
    const auto jumps = build_jump_operators(RateScheme{});
    const SteadyState a = solve_cycle(h, jumps);
    for (int row : {0, 19, 95, 304}) { // population rows sit at multiples of 19
        SolveOptions o;
        o.replaced_row = row;
        CHECK(maxabs(solve_cycle(h, jumps, o).rho - a.rho) < 1e-10);
    }
    SolveOptions coherence;
    coherence.replaced_row = 17;
    CHECK_THROWS_AS(solve_cycle(h, jumps, coherence), std::invalid_argument);
}

TEST_CASE("a Liouvillian with two stationary states is reported singular") {
    // two disconnected levels, nothing moves
    const CMat l = CMat::Zero(4, 4);
    CHECK_THROWS_AS(solve_steady_state(l), SingularSystem);
}

TEST_CASE("conserved nuclear observables are the nuclear operators commuting with every block") {
    SpinSystem sys;
    sys.hfc_gs_mT.setZero();
    sys.hfc_es_mT.setZero();
    // no hyperfine, no nuclear Zeeman splitting: every nuclear operator commutes
    sys.gamma_n_over_gamma_e = 0.0;
    CHECK(conserved_nuclear_observables(lab_block_hamiltonian(sys, 3.0)).size() == 4);
    sys.gamma_n_over_gamma_e = -3.024e-4;
    CHECK(conserved_nuclear_observables(lab_block_hamiltonian(sys, 3.0)).size() == 2);
    // full isotropic coupling mixes the nucleus with the electron
    SpinSystem d;
    CHECK(conserved_nuclear_observables(lab_block_hamiltonian(d, 3.0)).size() == 1);
    // rotating frame keeps only the secular part: Iz is conserved again
    FieldConfig f{3.0, 0.1, 2.0 * std::numbers::pi * 0.1, true};
    CHECK(conserved_nuclear_observables(rotating_block_hamiltonian(d, f)).size() == 2);
}

TEST_CASE("hyperfine-free steady state pins nuclear populations to 1/2 each") {
    SpinSystem sys;
    sys.hfc_gs_mT.setZero();
    sys.hfc_es_mT.setZero();
    const SteadyState s = solve_cycle(lab_block_hamiltonian(sys, 4.0), build_jump_operators(RateScheme{}));
    double alpha = 0.0;
    for (int i = 0; i < kFullDim; i += 2) alpha += s.rho(i, i).real();
    CHECK(alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.diag.constraints == 2);
    CHECK(s.diag.residual_inf < 1e-12);
}

TEST_CASE("time step above the stability bound is refused") {
    SpinSystem sys;
    const CMat l = assemble_liouvillian(lab_block_hamiltonian(sys, 1.0), build_jump_operators(RateScheme{}));
    CHECK_THROWS_AS(propagate(l, mixed(), 10.0, 2.0 * max_stable_step(l)), StepTooLarge);
}

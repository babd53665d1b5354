// steady_state.hpp - steady state of the Liouvillian by a bordered linear solve,
// plus a fixed-step RK4 propagator used as an independent check.
#pragma once

#include <cstdint>
#include <vector>

#include "vsi/kinetics.hpp"

namespace vsi {

struct SolveOptions {
    // Row of L replaced by the trace functional; -1 means the last one.
    int replaced_row{-1};
    // Reciprocal condition estimate below which SingularSystem is raised.
    double rcond_threshold{1e-15};
    int refinement_steps{2};
};

struct SteadyStateDiagnostics {
    double residual_inf{0.0};   // ||L vec(rho)||_inf after symmetrization
    double asymmetry_pre{0.0};  // ||rho - rho^dag||_inf straight out of the solve
    double min_eigenvalue{0.0};
    double rcond{0.0};
    int constraints{1};          // number of pinned conserved quantities (1 = trace only)
    bool positivity_warning{false};
};

struct SteadyState {
    CMat rho;
    SteadyStateDiagnostics diag;
};

// Null vector of L with unit trace. Requires a one-dimensional null space.
SteadyState solve_steady_state(const CMat& l, const SolveOptions& opt = {});

// Same, when the dynamics conserves each Tr(Q_k rho). The Q_k must span the
// left null space of L; each is pinned to its value in the maximally mixed
// state, Tr(Q_k)/M. The identity (trace) must lie in their span.
SteadyState solve_steady_state(const CMat& l, const std::vector<CMat>& conserved,
                               const SolveOptions& opt = {});

// Nuclear operators 1 (x) N (18x18) commuting with every block of h. Jump
// operators act as identity on the nucleus, so these are conserved by the
// full dynamics. Always contains (a multiple of) the identity.
std::vector<CMat> conserved_nuclear_observables(const BlockHamiltonian& h, double tol = 1e-12);

// Assemble, detect conserved nuclear observables, solve.
SteadyState solve_cycle(const BlockHamiltonian& h, const std::vector<JumpOperator>& jumps,
                        const SolveOptions& opt = {});

// Largest step accepted by propagate: 0.1 / ||L||_inf.
double max_stable_step(const CMat& l);

struct PropagationResult {
    CMat rho;
    double trace_drift{0.0};
    std::uint64_t steps{0};
    double dt_used{0.0};
};

// Classical RK4 with a fixed step h = t_final / ceil(t_final / dt). The step
// map is a fixed matrix, so N steps are applied as its N-th power by repeated
// squaring, in long double, on the real coordinates of block-diagonal
// Hermitian matrices (GS/ES/MS blocks when M = 18). rho0 must be Hermitian
// and block diagonal. Throws StepTooLarge if dt > max_stable_step(l).
PropagationResult propagate(const CMat& l, const CMat& rho0, double t_final, double dt);

} // namespace vsi

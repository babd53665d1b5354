#include "vsi/hamiltonians.hpp"

#include <stdexcept>

namespace vsi {

namespace {

struct Ops {
    SpinOperatorSet e = build_spin_operators(1.5);
    SpinOperatorSet n = build_spin_operators(0.5);
    CMat e1 = CMat::Identity(4, 4);
    CMat n1 = CMat::Identity(2, 2);
};

const Ops& ops() {
    static const Ops o;
    return o;
}

// Electron-only 4x4 operator lifted to the 8-dim product space.
CMat on_electron(const CMat& a) { return kron(a, ops().n1); }

CMat hfc_term(const Eigen::Matrix3d& a_rad, bool secular) {
    const auto& o = ops();
    const CMat* s[3] = {&o.e.sx, &o.e.sy, &o.e.sz};
    const CMat* n[3] = {&o.n.sx, &o.n.sy, &o.n.sz};
    CMat h = CMat::Zero(kStateDim, kStateDim);
    for (int i = 0; i < 3; ++i) {
        if (secular && i != 2) continue;
        for (int j = 0; j < 3; ++j) {
            if (a_rad(i, j) == 0.0) continue;
            h += a_rad(i, j) * kron(*s[i], *n[j]);
        }
    }
    return h;
}

// Spin Hamiltonian without the electron Zeeman term.
CMat static_part(const SpinSystem& sys, State state, double b_mT, bool secular) {
    const auto& o = ops();
    const double d = sys.to_rad_ns(sys.d_mT(state));
    const double wn = sys.gamma_n_over_gamma_e * sys.gamma_e() * b_mT;
    const CMat zfs = o.e.sz * o.e.sz - 1.25 * o.e1;
    CMat h = d * on_electron(zfs) - wn * kron(o.e1, o.n.sz);
    const Eigen::Matrix3d a = sys.gamma_e() * sys.hfc_mT(state);
    h += hfc_term(a, secular);
    return h;
}

} // namespace

CMat BlockHamiltonian::full() const {
    CMat h = CMat::Zero(kFullDim, kFullDim);
    h.block(0, 0, kStateDim, kStateDim) = h_gs;
    h.block(kStateDim, kStateDim, kStateDim, kStateDim) = h_es;
    h.block(2 * kStateDim, 2 * kStateDim, 2, 2) = h_ms;
    return h;
}

CMat build_state_hamiltonian(const SpinSystem& sys, State state, double b_mT, bool secular_hfc) {
    const double we = sys.gamma_e() * b_mT;
    return we * on_electron(ops().e.sz) + static_part(sys, state, b_mT, secular_hfc);
}

PerturbationTerms perturbation_terms(const SpinSystem& sys, double b_mT) {
    const auto& o = ops();
    const CMat& sz = o.e.sz;
    const CMat& sp = o.e.s_plus;
    const CMat& sm = o.e.s_minus;
    const double mub = kMuBOverHbar * b_mT;
    const double th = sys.theta_rad;

    PerturbationTerms t;
    t.par_2 = sys.g_par_2 * mub * sz * (sz * sz - 1.25 * o.e1);
    t.par_3 = sys.g_par_3 * mub * (sp * sp * sp - sm * sm * sm) / cplx(0.0, 4.0);
    t.perp_1 = sys.g_perp_1 * mub * th * o.e.sx;
    const CMat q = sz * sz - 0.75 * o.e1;
    t.perp_2 = sys.g_perp_2 * mub * th * (o.e.sx * q + q * o.e.sx);
    const CMat x = sp * sp - sm * sm;
    t.perp_3 = cplx(0.0, -0.25) * sys.g_perp_3 * mub * th * (x * sz + sz * x);
    return t;
}

CMat build_perturbation(const SpinSystem& sys, double b_mT) {
    const PerturbationTerms t = perturbation_terms(sys, b_mT);
    return on_electron(t.par_2 + t.par_3 + t.perp_1 + t.perp_2 + t.perp_3);
}

CMat build_rotating_frame_hamiltonian(const SpinSystem& sys, const FieldConfig& field,
                                      State state) {
    if (field.rf_on && !(field.b1_mT > 0.0))
        throw std::invalid_argument("rf_on requires b1 > 0");
    const auto& o = ops();
    const double we = sys.gamma_e() * field.b_mT;
    const double w1 = field.rf_on ? sys.gamma_e() * field.b1_mT : 0.0;
    return (we - field.omega_rf) * on_electron(o.e.sz) - w1 * on_electron(o.e.sx) +
           static_part(sys, state, field.b_mT, true);
}

CMat ms_hamiltonian(const SpinSystem& sys, double b_mT) {
    const double wn = sys.gamma_n_over_gamma_e * sys.gamma_e() * b_mT;
    return -wn * ops().n.sz;
}

BlockHamiltonian lab_block_hamiltonian(const SpinSystem& sys, double b_mT, bool perturbations) {
    BlockHamiltonian h;
    h.h_gs = build_state_hamiltonian(sys, State::GS, b_mT);
    h.h_es = build_state_hamiltonian(sys, State::ES, b_mT);
    if (perturbations) {
        const CMat v = build_perturbation(sys, b_mT);
        h.h_gs += v;
        h.h_es += v;
    }
    h.h_ms = ms_hamiltonian(sys, b_mT);
    return h;
}

BlockHamiltonian rotating_block_hamiltonian(const SpinSystem& sys, const FieldConfig& field,
                                            bool perturbations) {
    BlockHamiltonian h;
    h.h_gs = build_rotating_frame_hamiltonian(sys, field, State::GS);
    h.h_es = build_rotating_frame_hamiltonian(sys, field, State::ES);
    if (perturbations) {
        const CMat v = build_perturbation(sys, field.b_mT);
        h.h_gs += v;
        h.h_es += v;
    }
    h.h_ms = ms_hamiltonian(sys, field.b_mT);
    return h;
}

} // namespace vsi

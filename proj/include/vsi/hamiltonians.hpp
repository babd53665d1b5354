// hamiltonians.hpp - GS/ES spin Hamiltonians, Zeeman anisotropy and tilt terms,
// rotating-frame Hamiltonians. Everything is returned in rad/ns.
#pragma once

#include <numbers>

#include <Eigen/Dense>

#include "vsi/spin_algebra.hpp"

namespace vsi {

// Bohr magneton over hbar in rad ns^-1 mT^-1 (g = 1).
inline constexpr double kMuBOverHbar = 2.0 * std::numbers::pi * 0.0139962;

enum class State { GS, ES };

struct SpinSystem {
    double d_gs_mT{1.25};
    double d_es_mT{7.32};
    double g_par_1{2.0}, g_par_2{0.0}, g_par_3{0.0};
    double g_perp_1{2.0}, g_perp_2{0.0}, g_perp_3{0.2};
    Eigen::Matrix3d hfc_gs_mT{Eigen::Matrix3d::Identity() * 0.001};
    Eigen::Matrix3d hfc_es_mT{Eigen::Matrix3d::Identity() * 0.001};
    double gamma_n_over_gamma_e{-3.024e-4};
    double theta_rad{5.0 * std::numbers::pi / 180.0};

    // Electron gyromagnetic ratio, rad ns^-1 mT^-1. D and HFC values quoted in
    // mT are converted with this same factor.
    double gamma_e() const { return g_par_1 * kMuBOverHbar; }
    double to_rad_ns(double mT) const { return gamma_e() * mT; }
    double to_mT(double rad_ns) const { return rad_ns / gamma_e(); }

    double d_mT(State s) const { return s == State::GS ? d_gs_mT : d_es_mT; }
    const Eigen::Matrix3d& hfc_mT(State s) const { return s == State::GS ? hfc_gs_mT : hfc_es_mT; }
};

struct FieldConfig {
    double b_mT{0.0};
    double b1_mT{0.0};
    double omega_rf{0.0}; // rad/ns
    bool rf_on{false};
};

struct BlockHamiltonian {
    CMat h_gs, h_es, h_ms;
    CMat full() const;
};

// gamma_e B Sz - gamma_N B Iz + D (Sz^2 - 5/4) + S.A.I (8x8). With
// secular_hfc only the Sz-row of the tensor is kept.
CMat build_state_hamiltonian(const SpinSystem& sys, State state, double b_mT,
                             bool secular_hfc = false);

// Sum of the g-anisotropy and tilt terms, acting on the electron only (8x8).
CMat build_perturbation(const SpinSystem& sys, double b_mT);

// The individual terms on the 4-dim electron space, for inspection.
struct PerturbationTerms {
    CMat par_2, par_3, perp_1, perp_2, perp_3;
};
PerturbationTerms perturbation_terms(const SpinSystem& sys, double b_mT);

// Frame co-rotating with a circularly polarized drive at omega_rf (8x8).
CMat build_rotating_frame_hamiltonian(const SpinSystem& sys, const FieldConfig& field,
                                      State state);

// MS carries only the nuclear Zeeman term.
CMat ms_hamiltonian(const SpinSystem& sys, double b_mT);

BlockHamiltonian lab_block_hamiltonian(const SpinSystem& sys, double b_mT,
                                       bool perturbations = true);
BlockHamiltonian rotating_block_hamiltonian(const SpinSystem& sys, const FieldConfig& field,
                                            bool perturbations = false);

} // namespace vsi

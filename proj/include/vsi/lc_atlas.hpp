// lc_atlas.hpp - analytic level crossings of the secular spin Hamiltonian,
// their mixing elements, and a numeric minimal-gap finder to check them.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "vsi/hamiltonians.hpp"

namespace vsi {

// Hyperfine-resolved crossings a..d of the two families, plus the
// electron-only crossings they collapse to when a, gamma_n -> 0.
enum class LcFamily { LC1a, LC1b, LC1c, LC1d, LC2a, LC2b, LC2c, LC2d, LC1, LC2 };

std::string family_name(LcFamily f);

// Energies E1..E8 (rad/ns) of the secular Hamiltonian. State k correlates at
// high field with local basis index k-1: |3/2,a>, |3/2,b>, |1/2,a>, ...
std::array<double, 8> analytic_energies(double d_mT, double b_mT, double azz_mT,
                                        double gamma_ratio, double gamma_e = 2.0 * kMuBOverHbar);

// Crossing fields in mT, order LC-1 a,b,c,d then LC-2 a,b,c,d.
std::array<double, 8> lc_positions(double d_mT, double azz_mT, double gamma_ratio);

// Crossing partners as 1-based E-labels, same order as lc_positions.
std::array<std::pair<int, int>, 8> lc_pairs();

// Hyperfine matrix elements (mT) between the bare basis states.
struct FirstOrderMixing {
    double v_iso{0.0};
    double v1{0.0}, v2{0.0}, v3{0.0}, v4{0.0}, v5{0.0}, v6{0.0};
};
FirstOrderMixing first_order_mixing(const Eigen::Matrix3d& hfc_mT);

// Effective LC-2 couplings generated at second order by the hyperfine
// tensor, in mT. `alpha` couples |-3/2,a> with |1/2,a> at LC-2a, `beta`
// couples |-3/2,b> with |1/2,b> at LC-2d.
struct SecondOrderLc2 {
    double q1{0.0}, q2{0.0}, q3{0.0}, q4{0.0}, q5{0.0}, q6{0.0};
    // closed form sqrt3 (D -+ Azz)(Axx^2 - Ayy^2) / (4 (2D -+ Azz)^2)
    double printed_alpha{0.0}, printed_beta{0.0};
    // q1* V4 + q4 V1 + q1* q4 E(-1/2,b), with the absolute energy E(-1/2,b)
    double assembled_alpha{0.0}, assembled_beta{0.0};
    // same assembly with the intermediate energy measured from the crossing
    // level, i.e. V1 V4 / (E_cross - E_k): sqrt3 (Axx^2 - Ayy^2) / (4 (2D -+ Azz))
    double corrected_alpha{0.0}, corrected_beta{0.0};
    bool perturbative{true}; // all |q| < 0.3
};
SecondOrderLc2 second_order_lc2_elements(double d_mT, double axx_mT, double ayy_mT, double azz_mT,
                                         double gamma_ratio = 0.0);

// Tilt-induced electron mixing elements at their crossing fields, rad/ns.
struct MisalignmentElement {
    std::string term;       // "perp_1", "perp_2", "perp_3"
    double sz_a{0.0}, sz_b{0.0};
    double b_eval_mT{0.0};  // gamma_e B = 2D (perp_1, perp_2) or D (perp_3)
    cplx closed_form;       // sqrt3 (g/g_par1) D theta, times -i for perp_3
    cplx operator_element;  // <sz_a| V |sz_b> from build_perturbation
};
std::vector<MisalignmentElement> misalignment_elements(const SpinSystem& sys, State state);

struct LcCatalogEntry {
    State block{State::GS};
    LcFamily family{LcFamily::LC1a};
    double b_cross_mT{0.0};
    int state_a{-1}, state_b{-1}; // local basis indices (electron-only: nucleus alpha copy)
    std::string pair_label;
    bool nuclear_flip{false};
    cplx first_order;              // <a|H|b> at b_cross, rad/ns
    double second_order_printed{0.0};   // rad/ns, LC-2a/2d only
    double second_order_corrected{0.0}; // rad/ns, LC-2a/2d only
    std::vector<std::string> lifted_by;
};

std::vector<LcCatalogEntry> lc_catalog(const SpinSystem& sys, State state);
std::vector<LcCatalogEntry> lc_catalog(const SpinSystem& sys); // GS then ES

struct GapResult {
    double b_min_mT{0.0};
    double gap{0.0}; // rad/ns
};

// Tracks the two adiabatic levels that start on local basis states a and b
// at window.lo (maximal-overlap continuation over `grid` points), then
// refines the minimum of their splitting by golden-section search.
GapResult numeric_lac_gap(const SpinSystem& sys, State state, int a, int b, double lo_mT,
                          double hi_mT, bool perturbations = true, int grid = 400);

struct NearestLc {
    std::string name;
    double distance_mT{0.0};
};
NearestLc nearest_lc(const std::vector<LcCatalogEntry>& catalog, double b_mT);

} // namespace vsi

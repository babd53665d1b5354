#include <doctest.h>

#include <random>

#include "vsi/errors.hpp"
#include "vsi/lc_atlas.hpp"

using namespace vsi;

namespace {

const double kS3 = std::sqrt(3.0);

SpinSystem hfc_only(const Eigen::Matrix3d& a) {
    SpinSystem s;
    s.hfc_gs_mT = s.hfc_es_mT = a;
    s.theta_rad = 0.0;
    s.g_perp_3 = 0.0;
    return s;
}

Eigen::Matrix3d diag3(double x, double y, double z) {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 0) = x;
    a(1, 1) = y;
    a(2, 2) = z;
    return a;
}

} // namespace

TEST_CASE("analytic energies at zero field and zero coupling are +-D") {
    const double d = 1.25, ge = 2 * kMuBOverHbar;
    const auto e = analytic_energies(d, 0.0, 0.0, -3e-4);
    for (int k : {0, 1, 6, 7}) CHECK(e[static_cast<size_t>(k)] == doctest::Approx(ge * d).epsilon(1e-15));
    for (int k : {2, 3, 4, 5}) CHECK(e[static_cast<size_t>(k)] == doctest::Approx(-ge * d).epsilon(1e-15));
}

TEST_CASE("analytic energies equal the diagonal of the secular Hamiltonian") {
    std::mt19937 g(21);
    std::uniform_real_distribution<double> ub(0.0, 20.0), ua(-0.3, 0.3);
    for (int trial = 0; trial < 50; ++trial) {
        const double b = ub(g), azz = ua(g);
        SpinSystem s = hfc_only(diag3(0.1, 0.2, azz));
        const CMat h = build_state_hamiltonian(s, State::GS, b, true);
        const auto e = analytic_energies(s.d_gs_mT, b, azz, s.gamma_n_over_gamma_e, s.gamma_e());
        for (int k = 0; k < 8; ++k) CHECK(std::abs(h(k, k).real() - e[static_cast<size_t>(k)]) < 1e-12);
    }
}

TEST_CASE("E6 = E7 on the LC-1a condition (gamma_e + gamma_n) B = 2D - a") {
    const double d = 1.25, a = 0.2, r = -3.024e-4;
    const double b = (2 * d - a) / (1 + r);
    const auto e = analytic_energies(d, b, a, r);
    CHECK(std::abs(e[5] - e[6]) < 1e-12);
}

TEST_CASE("crossings collapse to 2D and D without hyperfine and nuclear Zeeman") {
    for (double d : {1.25, 7.32}) {
        const auto p = lc_positions(d, 0.0, 0.0);
        for (int k = 0; k < 4; ++k) CHECK(p[static_cast<size_t>(k)] == 2 * d);
        for (int k = 4; k < 8; ++k) CHECK(p[static_cast<size_t>(k)] == d);
    }
}

TEST_CASE("D = 1.25, a = 0.2, gamma_n = 0: LC-1b at 2.40, LC-1c at 2.60") {
    const auto p = lc_positions(1.25, 0.2, 0.0);
    CHECK(std::abs(p[1] - 2.40) < 1e-12);
    CHECK(std::abs(p[2] - 2.60) < 1e-12);
}

TEST_CASE("every crossing field zeroes its energy difference") {
    std::mt19937 g(4);
    std::uniform_real_distribution<double> ud(0.5, 10.0), ua(-0.3, 0.3), ur(-1e-3, 1e-3);
    const auto pairs = lc_pairs();
    for (int trial = 0; trial < 50; ++trial) {
        const double d = ud(g), a = ua(g), r = ur(g);
        const auto p = lc_positions(d, a, r);
        for (size_t k = 0; k < 8; ++k) {
            const auto e = analytic_energies(d, p[k], a, r);
            CHECK(std::abs(e[static_cast<size_t>(pairs[k].first - 1)] - e[static_cast<size_t>(pairs[k].second - 1)]) <
                  1e-12);
        }
    }
}

TEST_CASE("crossing fields are ordered a < b < c < d for a > 0 and small positive gamma_n") {
    for (double d : {1.25, 7.32}) {
        const auto p = lc_positions(d, 0.2, 1e-4);
        CHECK(p[0] < p[1]);
        CHECK(p[1] < p[2]);
        CHECK(p[2] < p[3]);
        CHECK(p[4] < p[5]);
        CHECK(p[5] < p[6]);
        CHECK(p[6] < p[7]);
    }
}

TEST_CASE("gamma ratio of -1 makes LC-1a undefined") {
    CHECK_THROWS_AS(lc_positions(1.25, 0.2, -1.0), DegenerateGamma);
}

TEST_CASE("first-order hyperfine elements") {
    const auto iso = first_order_mixing(diag3(0.2, 0.2, 0.2));
    CHECK(iso.v_iso == doctest::Approx(kS3 / 2 * 0.2).epsilon(1e-15));
    CHECK(iso.v_iso == doctest::Approx(0.1732).epsilon(1e-4));
    CHECK(iso.v2 == 0.0);
    CHECK(iso.v4 == 0.0);
    CHECK(iso.v6 == 0.0);
    const auto an = first_order_mixing(diag3(0.2, 0.0, 0.2));
    CHECK(an.v2 == doctest::Approx(kS3 / 4 * 0.2).epsilon(1e-15));
    CHECK(an.v2 == doctest::Approx(0.0866).epsilon(1e-3));
}

TEST_CASE("first-order elements are the Hamiltonian's own off-diagonal entries") {
    // V1: <-1/2,b|H|-3/2,a> (LC-1a), V2: <-1/2,a|H|-3/2,b> (LC-1d)
    SpinSystem s = hfc_only(diag3(0.23, 0.07, 0.11));
    s.d_gs_mT = 0.0;
    s.gamma_n_over_gamma_e = 0.0;
    const CMat h = build_state_hamiltonian(s, State::GS, 0.0) / s.gamma_e();
    const auto v = first_order_mixing(s.hfc_gs_mT);
    CHECK(std::abs(std::abs(h(5, 6)) - v.v1) < 1e-14);
    CHECK(std::abs(std::abs(h(4, 7)) - v.v2) < 1e-14);
    // <1/2,b|H|-1/2,a> single flip (V5), <1/2,a|H|-1/2,b> double (V4)
    CHECK(std::abs(std::abs(h(3, 4)) - v.v5) < 1e-14);
    CHECK(std::abs(std::abs(h(2, 5)) - v.v4) < 1e-14);
}

TEST_CASE("second-order LC-2 elements") {
    SUBCASE("axial tensor gives exactly zero") {
        const auto s = second_order_lc2_elements(1.25, 0.2, 0.2, 0.1);
        CHECK(s.printed_alpha == 0.0);
        CHECK(s.printed_beta == 0.0);
        CHECK(s.corrected_alpha == 0.0);
    }
    SUBCASE("Azz = 0: both equal sqrt3 (Axx^2 - Ayy^2) / (16 D)") {
        const double d = 1.25, x = 0.2, y = 0.05;
        const auto s = second_order_lc2_elements(d, x, y, 0.0);
        const double expect = kS3 * (x * x - y * y) / (16 * d);
        CHECK(s.printed_alpha == doctest::Approx(expect).epsilon(1e-12));
        CHECK(s.printed_beta == doctest::Approx(expect).epsilon(1e-12));
        CHECK(s.perturbative);
    }
    SUBCASE("the assembled sum with absolute energies is what the closed form encodes") {
        const auto s = second_order_lc2_elements(1.25, 0.2, 0.0, 0.2);
        CHECK(s.assembled_alpha == doctest::Approx(s.printed_alpha).epsilon(1e-12));
        CHECK(s.assembled_beta == doctest::Approx(s.printed_beta).epsilon(1e-12));
        CHECK(s.corrected_alpha == doctest::Approx(kS3 * 0.04 / (4 * (2.5 - 0.2))).epsilon(1e-12));
        CHECK(s.corrected_beta == doctest::Approx(kS3 * 0.04 / (4 * (2.5 + 0.2))).epsilon(1e-12));
    }
    SUBCASE("Azz = 2D leaves the alpha denominator empty") {
        CHECK_THROWS_AS(second_order_lc2_elements(1.25, 0.2, 0.0, 2.5), VanishingDenominator);
    }
}

TEST_CASE("misalignment elements") {
    SUBCASE("no tilt: all zero") {
        SpinSystem s;
        s.theta_rad = 0.0;
        for (const auto& m : misalignment_elements(s, State::GS)) {
            CHECK(std::abs(m.closed_form) == 0.0);
            CHECK(std::abs(m.operator_element) == 0.0);
        }
    }
    SUBCASE("D = 1.25, 5 deg: first element 0.189 mT") {
        SpinSystem s;
        const auto m = misalignment_elements(s, State::GS);
        REQUIRE(m.size() == 3);
        CHECK(m[0].term == "perp_1");
        CHECK(s.to_mT(m[0].closed_form.real()) == doctest::Approx(kS3 * 1.25 * 5 * std::numbers::pi / 180).epsilon(1e-12));
        CHECK(s.to_mT(m[0].closed_form.real()) == doctest::Approx(0.189).epsilon(2e-3));
    }
    SUBCASE("closed forms agree with the operator elements within 10%") {
        SpinSystem s;
        s.g_perp_2 = 0.05;
        for (State st : {State::GS, State::ES})
            for (const auto& m : misalignment_elements(s, st)) {
                CAPTURE(m.term);
                CHECK(std::abs(m.operator_element - m.closed_form) <= 0.1 * std::abs(m.closed_form));
            }
    }
}

TEST_CASE("catalog: nuclear flips exactly at LC-1a, 1d, 2b, 2c") {
    for (const auto& e : lc_catalog(SpinSystem{})) {
        const bool flip = e.family == LcFamily::LC1a || e.family == LcFamily::LC1d ||
                          e.family == LcFamily::LC2b || e.family == LcFamily::LC2c;
        CAPTURE(family_name(e.family));
        CHECK(e.nuclear_flip == flip);
        // from the state labels: nucleus is the parity of the local index
        CHECK(((e.state_a % 2) != (e.state_b % 2)) == flip);
    }
}

TEST_CASE("catalog crossing fields are degenerate in the secular model") {
    SpinSystem s = hfc_only(diag3(0.2, 0.0, 0.2));
    for (const auto& e : lc_catalog(s)) {
        if (e.family == LcFamily::LC1 || e.family == LcFamily::LC2) continue;
        const CMat h = build_state_hamiltonian(s, e.block, e.b_cross_mT, true);
        CHECK(std::abs(h(e.state_a, e.state_a) - h(e.state_b, e.state_b)) < 1e-12);
    }
}

TEST_CASE("catalog with a = 0 lists electron-only crossings at D and 2D") {
    SpinSystem s;
    s.hfc_gs_mT.setZero();
    bool lc1 = false, lc2 = false;
    for (const auto& e : lc_catalog(s, State::GS)) {
        if (e.family == LcFamily::LC1) lc1 = e.b_cross_mT == 2.5;
        if (e.family == LcFamily::LC2) lc2 = e.b_cross_mT == 1.25;
    }
    CHECK(lc1);
    CHECK(lc2);
}

TEST_CASE("numeric gap: isotropic hyperfine at GS LC-1a is 2 V_iso within 2%") {
    SpinSystem s = hfc_only(Eigen::Matrix3d::Identity() * 0.2);
    const GapResult g = numeric_lac_gap(s, State::GS, 6, 5, 2.0, 2.6, false);
    const double v = first_order_mixing(s.hfc_gs_mT).v_iso;
    CHECK(s.to_mT(g.gap) == doctest::Approx(2 * v).epsilon(0.02));
}

TEST_CASE("numeric gap: a true crossing closes to zero") {
    SpinSystem s = hfc_only(Eigen::Matrix3d::Zero());
    s.gamma_n_over_gamma_e = 0.0;
    const GapResult g = numeric_lac_gap(s, State::GS, 6, 4, 2.0, 3.0, false);
    CHECK(g.gap < 1e-10);
    CHECK(g.b_min_mT == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("numeric gap: 5 deg tilt at GS LC-1 is 2 sqrt3 D theta within 10%") {
    SpinSystem s;
    s.hfc_gs_mT.setZero();
    const GapResult g = numeric_lac_gap(s, State::GS, 6, 4, 1.5, 3.5, true);
    CHECK(s.to_mT(g.gap) == doctest::Approx(2 * kS3 * 1.25 * s.theta_rad).epsilon(0.10));
}

TEST_CASE("numeric gap outside any crossing reports it") {
    SpinSystem s = hfc_only(Eigen::Matrix3d::Identity() * 0.2);
    CHECK_THROWS_AS(numeric_lac_gap(s, State::GS, 6, 5, 5.0, 6.0, false), NoCrossingInWindow);
}

TEST_CASE("nearest crossing annotation") {
    const auto cat = lc_catalog(SpinSystem{});
    const auto n = nearest_lc(cat, 14.7);
    CHECK(n.name.rfind("ES LC-1", 0) == 0);
    CHECK(std::abs(n.distance_mT) < 0.07);
}

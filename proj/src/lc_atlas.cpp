#include "vsi/lc_atlas.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "vsi/errors.hpp"

namespace vsi {

namespace {

const double kSqrt3 = std::sqrt(3.0);

double checked(double denom, const char* what) {
    if (std::abs(denom) < 1e-12) throw DegenerateGamma(what);
    return denom;
}

double nonzero(double denom, const char* what) {
    if (std::abs(denom) < 1e-12) throw VanishingDenominator(what);
    return denom;
}

const char* kE[] = {"", "3/2,a", "3/2,b", "1/2,a", "1/2,b", "-1/2,a", "-1/2,b", "-3/2,a", "-3/2,b"};

CMat lab_state_h(const SpinSystem& sys, State s, double b, bool pert) {
    CMat h = build_state_hamiltonian(sys, s, b);
    if (pert) h += build_perturbation(sys, b);
    return h;
}

} // namespace

std::string family_name(LcFamily f) {
    switch (f) {
    case LcFamily::LC1a: return "LC-1a";
    case LcFamily::LC1b: return "LC-1b";
    case LcFamily::LC1c: return "LC-1c";
    case LcFamily::LC1d: return "LC-1d";
    case LcFamily::LC2a: return "LC-2a";
    case LcFamily::LC2b: return "LC-2b";
    case LcFamily::LC2c: return "LC-2c";
    case LcFamily::LC2d: return "LC-2d";
    case LcFamily::LC1: return "LC-1";
    case LcFamily::LC2: return "LC-2";
    }
    return "?";
}

std::array<double, 8> analytic_energies(double d_mT, double b_mT, double azz_mT,
                                        double gamma_ratio, double gamma_e) {
    const double d = gamma_e * d_mT, a = gamma_e * azz_mT;
    const double we = gamma_e * b_mT, wn = gamma_ratio * we;
    return {
        d + 1.5 * we - 0.5 * wn + 0.75 * a,  d + 1.5 * we + 0.5 * wn - 0.75 * a,
        -d + 0.5 * we - 0.5 * wn + 0.25 * a, -d + 0.5 * we + 0.5 * wn - 0.25 * a,
        -d - 0.5 * we - 0.5 * wn - 0.25 * a, -d - 0.5 * we + 0.5 * wn + 0.25 * a,
        d - 1.5 * we - 0.5 * wn - 0.75 * a,  d - 1.5 * we + 0.5 * wn + 0.75 * a,
    };
}

std::array<double, 8> lc_positions(double d, double a, double r) {
    return {
        (2 * d - a) / checked(1 + r, "1 + gamma_n/gamma_e vanishes"),
        2 * d - a / 2,
        2 * d + a / 2,
        (2 * d + a) / checked(1 - r, "1 - gamma_n/gamma_e vanishes"),
        d - a / 2,
        (d - a / 4) / checked(1 + r / 2, "1 + gamma_n/(2 gamma_e) vanishes"),
        (d + a / 4) / checked(1 - r / 2, "1 - gamma_n/(2 gamma_e) vanishes"),
        d + a / 2,
    };
}

std::array<std::pair<int, int>, 8> lc_pairs() {
    return {{{6, 7}, {5, 7}, {6, 8}, {5, 8}, {3, 7}, {4, 7}, {3, 8}, {4, 8}}};
}

FirstOrderMixing first_order_mixing(const Eigen::Matrix3d& a) {
    const double sum = a(0, 0) + a(1, 1), diff = a(0, 0) - a(1, 1);
    FirstOrderMixing m;
    m.v_iso = kSqrt3 / 4 * sum;
    m.v1 = kSqrt3 / 4 * sum;
    m.v2 = kSqrt3 / 4 * diff;
    m.v3 = kSqrt3 / 4 * sum;
    m.v4 = 0.5 * diff;
    m.v5 = 0.5 * sum;
    m.v6 = kSqrt3 / 4 * diff;
    return m;
}

SecondOrderLc2 second_order_lc2_elements(double d, double axx, double ayy, double azz, double r) {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 0) = axx;
    a(1, 1) = ayy;
    a(2, 2) = azz;
    const FirstOrderMixing v = first_order_mixing(a);
    const double x2 = (axx - ayy) * (axx + ayy); // exact zero when isotropic, even with FMA
    SecondOrderLc2 s;

    // LC-2a: 2 we = 2D - Azz
    {
        const double we = d - azz / 2, wn = r * we;
        const double den = nonzero(we - wn, "we - wn vanishes at LC-2a");
        s.q1 = v.v1 / den;
        s.q4 = v.v4 / den;
        s.q3 = -v.v3 / nonzero(2 * d + we + wn - azz, "q3 denominator vanishes");
        const double e6 = -d - 0.5 * we + 0.5 * wn + 0.25 * azz;
        const double e7 = d - 1.5 * we - 0.5 * wn - 0.75 * azz;
        s.assembled_alpha = s.q1 * v.v4 + s.q4 * v.v1 + s.q1 * s.q4 * e6;
        s.corrected_alpha = s.q1 * v.v4 + s.q4 * v.v1 + s.q1 * s.q4 * (e6 - e7);
        const double g = nonzero(2 * d - azz, "2D - Azz vanishes");
        s.printed_alpha = kSqrt3 * (d - azz) * x2 / (4 * g * g);
    }
    // LC-2d: 2 we = 2D + Azz
    {
        const double we = d + azz / 2, wn = r * we;
        const double den = nonzero(we + wn, "we + wn vanishes at LC-2d");
        s.q2 = v.v2 / den;
        s.q5 = v.v5 / den;
        s.q6 = -v.v6 / nonzero(2 * d + we - wn + azz, "q6 denominator vanishes");
        const double e5 = -d - 0.5 * we - 0.5 * wn - 0.25 * azz;
        const double e8 = d - 1.5 * we + 0.5 * wn + 0.75 * azz;
        s.assembled_beta = s.q2 * v.v5 + s.q5 * v.v2 + s.q2 * s.q5 * e5;
        s.corrected_beta = s.q2 * v.v5 + s.q5 * v.v2 + s.q2 * s.q5 * (e5 - e8);
        const double g = nonzero(2 * d + azz, "2D + Azz vanishes");
        s.printed_beta = kSqrt3 * (d + azz) * x2 / (4 * g * g);
    }
    for (double q : {s.q1, s.q2, s.q3, s.q4, s.q5, s.q6})
        if (std::abs(q) >= 0.3) s.perturbative = false;
    return s;
}

std::vector<MisalignmentElement> misalignment_elements(const SpinSystem& sys, State state) {
    const double d = sys.d_mT(state);
    const double th = sys.theta_rad;
    const double ge = sys.gamma_e();
    const int m32 = local_index(-1.5, 0), m12 = local_index(-0.5, 0), p12 = local_index(0.5, 0);

    std::vector<MisalignmentElement> out;
    auto elem = [&](const CMat& term, int i, int j) { return kron(term, CMat::Identity(2, 2))(i, j); };

    {
        const double b = 2 * d;
        const auto t = perturbation_terms(sys, b);
        out.push_back({"perp_1", -1.5, -0.5, b, cplx(kSqrt3 * sys.g_perp_1 / sys.g_par_1 * ge * d * th, 0.0),
                       elem(t.perp_1, m32, m12)});
        out.push_back({"perp_2", -1.5, -0.5, b, cplx(kSqrt3 * sys.g_perp_2 / sys.g_par_1 * ge * d * th, 0.0),
                       elem(t.perp_2, m32, m12)});
    }
    {
        const double b = d;
        const auto t = perturbation_terms(sys, b);
        out.push_back({"perp_3", -1.5, 0.5, b, cplx(0.0, -kSqrt3 * sys.g_perp_3 / sys.g_par_1 * ge * d * th),
                       elem(t.perp_3, m32, p12)});
    }
    return out;
}

std::vector<LcCatalogEntry> lc_catalog(const SpinSystem& sys, State state) {
    const double d = sys.d_mT(state);
    const Eigen::Matrix3d& a = sys.hfc_mT(state);
    const double r = sys.gamma_n_over_gamma_e;
    const auto pos = lc_positions(d, a(2, 2), r);
    const auto pairs = lc_pairs();
    const auto so = second_order_lc2_elements(d, a(0, 0), a(1, 1), a(2, 2), r);
    const double ge = sys.gamma_e();

    auto tags_at = [&](double b, int i, int j, LcCatalogEntry& e, bool with_hfc) {
        const CMat hs = build_state_hamiltonian(sys, state, b);
        const auto t = perturbation_terms(sys, b);
        const CMat id2 = CMat::Identity(2, 2);
        cplx total = 0.0;
        if (with_hfc && std::abs(hs(i, j)) > 0.0) {
            e.lifted_by.push_back("hfc");
            total += hs(i, j);
        }
        const std::pair<const char*, const CMat*> terms[] = {
            {"par_2", &t.par_2}, {"par_3", &t.par_3}, {"perp_1", &t.perp_1},
            {"perp_2", &t.perp_2}, {"perp_3", &t.perp_3}};
        for (const auto& [name, m] : terms) {
            const cplx v = kron(*m, id2)(i, j);
            if (std::abs(v) > 0.0) {
                e.lifted_by.push_back(name);
                total += v;
            }
        }
        e.first_order = total;
    };

    std::vector<LcCatalogEntry> out;
    for (int k = 0; k < 8; ++k) {
        LcCatalogEntry e;
        e.block = state;
        e.family = static_cast<LcFamily>(k);
        e.b_cross_mT = pos[static_cast<size_t>(k)];
        e.state_a = pairs[static_cast<size_t>(k)].first - 1;
        e.state_b = pairs[static_cast<size_t>(k)].second - 1;
        e.pair_label = std::string("E") + std::to_string(e.state_a + 1) + "(" + kE[e.state_a + 1] +
                       ")/E" + std::to_string(e.state_b + 1) + "(" + kE[e.state_b + 1] + ")";
        e.nuclear_flip = (e.state_a % 2) != (e.state_b % 2);
        tags_at(e.b_cross_mT, e.state_a, e.state_b, e, true);
        if (e.family == LcFamily::LC2a) {
            e.second_order_printed = ge * so.printed_alpha;
            e.second_order_corrected = ge * so.corrected_alpha;
        } else if (e.family == LcFamily::LC2d) {
            e.second_order_printed = ge * so.printed_beta;
            e.second_order_corrected = ge * so.corrected_beta;
        }
        if (e.second_order_corrected != 0.0) e.lifted_by.push_back("hfc_second_order");
        out.push_back(e);
    }
    // electron-only crossings, alpha copy
    const int m32 = local_index(-1.5, 0), m12 = local_index(-0.5, 0), p12 = local_index(0.5, 0);
    for (auto [fam, b, j, lbl] : {std::tuple{LcFamily::LC1, 2 * d, m12, "-3/2/-1/2"},
                                  std::tuple{LcFamily::LC2, d, p12, "-3/2/1/2"}}) {
        LcCatalogEntry e;
        e.block = state;
        e.family = fam;
        e.b_cross_mT = b;
        e.state_a = m32;
        e.state_b = j;
        e.pair_label = lbl;
        tags_at(b, m32, j, e, false);
        out.push_back(e);
    }
    return out;
}

std::vector<LcCatalogEntry> lc_catalog(const SpinSystem& sys) {
    auto out = lc_catalog(sys, State::GS);
    auto es = lc_catalog(sys, State::ES);
    out.insert(out.end(), es.begin(), es.end());
    return out;
}

namespace {

struct Tracked {
    int ia, ib;
    double gap;
    CMat vecs;
};

// Pick, among eigenvectors, the best overlaps with the two reference vectors.
void match(const CMat& vecs, const CVec& ra, const CVec& rb, int& ia, int& ib) {
    const Eigen::VectorXd oa = (vecs.adjoint() * ra).cwiseAbs2();
    const Eigen::VectorXd ob = (vecs.adjoint() * rb).cwiseAbs2();
    oa.maxCoeff(&ia);
    Eigen::VectorXd ob2 = ob;
    ob2(ia) = -1.0;
    ob2.maxCoeff(&ib);
}

Tracked track_at(const SpinSystem& sys, State s, double b, bool pert, const CVec& ra, const CVec& rb) {
    Eigen::SelfAdjointEigenSolver<CMat> es(lab_state_h(sys, s, b, pert));
    Tracked t;
    match(es.eigenvectors(), ra, rb, t.ia, t.ib);
    t.gap = std::abs(es.eigenvalues()(t.ia) - es.eigenvalues()(t.ib));
    t.vecs = es.eigenvectors();
    return t;
}

} // namespace

GapResult numeric_lac_gap(const SpinSystem& sys, State state, int a, int b, double lo, double hi,
                          bool pert, int grid) {
    if (!(lo < hi) || grid < 3) throw std::invalid_argument("numeric_lac_gap: bad window");
    if (a < 0 || a >= kStateDim || b < 0 || b >= kStateDim || a == b)
        throw std::invalid_argument("numeric_lac_gap: bad state pair");

    CVec ra = CVec::Zero(kStateDim), rb = CVec::Zero(kStateDim);
    ra(a) = 1.0;
    rb(b) = 1.0;
    std::vector<double> bs(static_cast<size_t>(grid)), gaps(static_cast<size_t>(grid));
    std::vector<CVec> va(static_cast<size_t>(grid)), vb(static_cast<size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const double bf = lo + (hi - lo) * i / (grid - 1);
        const Tracked t = track_at(sys, state, bf, pert, ra, rb);
        bs[static_cast<size_t>(i)] = bf;
        gaps[static_cast<size_t>(i)] = t.gap;
        ra = t.vecs.col(t.ia);
        rb = t.vecs.col(t.ib);
        va[static_cast<size_t>(i)] = ra;
        vb[static_cast<size_t>(i)] = rb;
    }
    int imin = 0;
    for (int i = 1; i < grid; ++i)
        if (gaps[static_cast<size_t>(i)] < gaps[static_cast<size_t>(imin)]) imin = i;
    if (imin == 0 || imin == grid - 1)
        throw NoCrossingInWindow("tracked splitting is monotonic across the window");

    const CVec ca = va[static_cast<size_t>(imin)], cb = vb[static_cast<size_t>(imin)];
    auto g = [&](double bf) { return track_at(sys, state, bf, pert, ca, cb).gap; };
    double x0 = bs[static_cast<size_t>(imin - 1)], x3 = bs[static_cast<size_t>(imin + 1)];
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = x3 - phi * (x3 - x0), x2 = x0 + phi * (x3 - x0);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 200 && (x3 - x0) > 1e-13 * std::max(1.0, std::abs(x3)); ++it) {
        if (g1 < g2) {
            x3 = x2;
            x2 = x1;
            g2 = g1;
            x1 = x3 - phi * (x3 - x0);
            g1 = g(x1);
        } else {
            x0 = x1;
            x1 = x2;
            g1 = g2;
            x2 = x0 + phi * (x3 - x0);
            g2 = g(x2);
        }
    }
    GapResult r;
    r.b_min_mT = g1 < g2 ? x1 : x2;
    r.gap = std::min(g1, g2);
    if (gaps[static_cast<size_t>(imin)] < r.gap) {
        r.gap = gaps[static_cast<size_t>(imin)];
        r.b_min_mT = bs[static_cast<size_t>(imin)];
    }
    return r;
}

NearestLc nearest_lc(const std::vector<LcCatalogEntry>& catalog, double b) {
    NearestLc best{"", std::numeric_limits<double>::infinity()};
    for (const auto& e : catalog) {
        const double dist = b - e.b_cross_mT;
        if (std::abs(dist) < std::abs(best.distance_mT)) {
            best.name = std::string(e.block == State::GS ? "GS " : "ES ") + family_name(e.family);
            best.distance_mT = dist;
        }
    }
    return best;
}

} // namespace vsi

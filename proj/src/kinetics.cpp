#include "vsi/kinetics.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace vsi {

namespace {

constexpr int kMs = 8;

struct Transition {
    int to, from;
    double rate;
    const char* label;
};

std::vector<Transition> transitions(const RateScheme& r, IscAssignment isc) {
    const double isc_half = isc == IscAssignment::ByGroup ? r.k1_isc : r.k2_isc;
    const double isc_three = isc == IscAssignment::ByGroup ? r.k2_isc : r.k1_isc;
    static const char* pump[] = {"pump 3/2", "pump 1/2", "pump -1/2", "pump -3/2"};
    static const char* fl[] = {"fl 3/2", "fl 1/2", "fl -1/2", "fl -3/2"};
    static const char* isc_l[] = {"isc 3/2", "isc 1/2", "isc -1/2", "isc -3/2"};

    std::vector<Transition> t;
    for (int m = 0; m < 4; ++m) t.push_back({4 + m, m, r.pump_i, pump[m]});
    for (int m = 0; m < 4; ++m) {
        const bool half = (m == 1 || m == 2);
        t.push_back({m, 4 + m, half ? r.k1_fl : r.k2_fl, fl[m]});
        t.push_back({kMs, 4 + m, half ? isc_half : isc_three, isc_l[m]});
    }
    t.push_back({1, kMs, r.kprime_isc, "isc' -> 1/2"});
    t.push_back({2, kMs, r.kprime_isc, "isc' -> -1/2"});
    return t;
}

} // namespace

void validate(const RateScheme& r) {
    for (double k : {r.pump_i, r.k1_fl, r.k2_fl, r.k1_isc, r.k2_isc, r.kprime_isc})
        if (!(k >= 0.0) || !std::isfinite(k))
            throw std::invalid_argument("rates must be finite and nonnegative");
}

Eigen::MatrixXd electronic_rate_matrix(const RateScheme& r, IscAssignment isc) {
    validate(r);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(9, 9);
    for (const auto& t : transitions(r, isc)) m(t.to, t.from) = std::sqrt(t.rate);
    return m;
}

std::vector<JumpOperator> build_jump_operators(const RateScheme& r, IscAssignment isc) {
    validate(r);
    std::vector<JumpOperator> out;
    for (const auto& t : transitions(r, isc)) {
        if (t.rate <= 0.0) continue;
        CMat e = CMat::Zero(9, 9);
        e(t.to, t.from) = std::sqrt(t.rate);
        out.push_back({t.from, t.to, t.rate, t.label, kron(e, CMat::Identity(2, 2))});
    }
    return out;
}

CMat assemble_liouvillian(const CMat& h, const std::vector<CMat>& jumps) {
    const Eigen::Index m = h.rows();
    if (h.cols() != m) throw std::invalid_argument("Hamiltonian must be square");
    const Eigen::Index n = m * m;
    CMat l = CMat::Zero(n, n);
    const cplx mi(0.0, -1.0);

    // -i (1 (x) H): block diagonal copies of H
    for (Eigen::Index j = 0; j < m; ++j)
        l.block(j * m, j * m, m, m) += mi * h;
    // +i (H^T (x) 1): element (j*m+i, k*m+i) += i H(k, j)
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k) {
            const cplx v = -mi * h(k, j);
            if (v == cplx(0.0)) continue;
            for (Eigen::Index i = 0; i < m; ++i) l(j * m + i, k * m + i) += v;
        }

    for (const CMat& jmp : jumps) {
        if (jmp.rows() != m || jmp.cols() != m)
            throw std::invalid_argument("jump operator dimension does not match the Hamiltonian");
        // nonzero pattern; operators are sparse
        std::vector<std::tuple<Eigen::Index, Eigen::Index, cplx>> nz;
        for (Eigen::Index c = 0; c < m; ++c)
            for (Eigen::Index r = 0; r < m; ++r)
                if (jmp(r, c) != cplx(0.0)) nz.emplace_back(r, c, jmp(r, c));
        // conj(J) (x) J : element (a*m+c, b*m+d) = conj(J_ab) J_cd
        for (const auto& [a, b, jab] : nz)
            for (const auto& [c, d, jcd] : nz)
                l(a * m + c, b * m + d) += std::conj(jab) * jcd;
        const CMat jj = jmp.adjoint() * jmp;
        for (Eigen::Index j = 0; j < m; ++j)
            l.block(j * m, j * m, m, m) -= 0.5 * jj;
        for (Eigen::Index j = 0; j < m; ++j)
            for (Eigen::Index k = 0; k < m; ++k) {
                const cplx v = jj(k, j);
                if (v == cplx(0.0)) continue;
                for (Eigen::Index i = 0; i < m; ++i) l(j * m + i, k * m + i) -= 0.5 * v;
            }
    }
    return l;
}

CMat assemble_liouvillian(const BlockHamiltonian& h, const std::vector<JumpOperator>& jumps) {
    std::vector<CMat> ops;
    ops.reserve(jumps.size());
    for (const auto& j : jumps) ops.push_back(j.op);
    return assemble_liouvillian(h.full(), ops);
}

CVec vectorize(const CMat& rho) {
    return Eigen::Map<const CVec>(rho.data(), rho.size());
}

CMat unvectorize(const CVec& v) {
    const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (m * m != v.size()) throw std::invalid_argument("vector length is not a square");
    return Eigen::Map<const CMat>(v.data(), m, m);
}

} // namespace vsi

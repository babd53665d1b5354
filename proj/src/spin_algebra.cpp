#include "vsi/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace vsi {

SpinOperatorSet build_spin_operators(double s) {
    const double twice = 2.0 * s;
    if (std::abs(twice - std::round(twice)) > 1e-12 || twice < 0.5)
        throw std::invalid_argument("spin must be a positive half-integer");
    if (std::abs(s - 0.5) > 1e-12 && std::abs(s - 1.5) > 1e-12)
        throw std::invalid_argument("only s = 1/2 and s = 3/2 are supported");

    const int n = static_cast<int>(std::lround(twice)) + 1;
    SpinOperatorSet o;
    o.s = s;
    o.sz = CMat::Zero(n, n);
    o.s_plus = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = s - i;
        o.sz(i, i) = m;
        // <m+1| S+ |m> sits one row above
        if (i > 0) o.s_plus(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    o.s_minus = o.s_plus.adjoint();
    o.sx = 0.5 * (o.s_plus + o.s_minus);
    o.sy = cplx(0.0, -0.5) * (o.s_plus - o.s_minus);
    return o;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

int block_offset(Block b) {
    switch (b) {
    case Block::GS: return 0;
    case Block::ES: return kStateDim;
    case Block::MS: return 2 * kStateDim;
    }
    return 0;
}

int local_index(double sz, int nuc) {
    const double k = 1.5 - sz;
    if (std::abs(k - std::round(k)) > 1e-12 || k < -0.5 || k > 3.5)
        throw std::invalid_argument("Sz must be one of 3/2, 1/2, -1/2, -3/2");
    if (nuc != 0 && nuc != 1) throw std::invalid_argument("nuclear index must be 0 or 1");
    return 2 * static_cast<int>(std::lround(k)) + nuc;
}

int basis_index(Block b, double sz, int nuc) {
    if (b == Block::MS) {
        if (nuc != 0 && nuc != 1) throw std::invalid_argument("nuclear index must be 0 or 1");
        return block_offset(b) + nuc;
    }
    return block_offset(b) + local_index(sz, nuc);
}

std::string basis_label(int idx) {
    static const char* spins[] = {"3/2", "1/2", "-1/2", "-3/2"};
    const char* nuc = (idx % 2 == 0) ? "a" : "b";
    if (idx < 0 || idx >= kFullDim) throw std::out_of_range("basis index");
    if (idx >= 2 * kStateDim) return std::string("MS|") + nuc;
    const char* blk = idx < kStateDim ? "GS|" : "ES|";
    return std::string(blk) + spins[(idx % kStateDim) / 2] + "," + nuc;
}

namespace {

void require_spin_block(Block b) {
    if (b == Block::MS)
        throw std::invalid_argument("the MS level carries no electron-spin projectors");
}

} // namespace

CMat projector(Block b, SpinGroup group) {
    require_spin_block(b);
    const double m = group == SpinGroup::Half ? 0.5 : 1.5;
    return projector(b, m) + projector(b, -m);
}

CMat projector(Block b, double sz) {
    require_spin_block(b);
    CMat p = CMat::Zero(kFullDim, kFullDim);
    for (int nuc = 0; nuc < 2; ++nuc) {
        const int i = basis_index(b, sz, nuc);
        p(i, i) = 1.0;
    }
    return p;
}

} // namespace vsi

// RK4 oracle. The step map P = 1 + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24 is
// the same at every step, so N steps equal P^N. Working on the real
// coordinates of block-diagonal Hermitian matrices keeps the matrices small
// (132 for the 8+8+2 layout) and real, which makes long double affordable.
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vsi/errors.hpp"
#include "vsi/steady_state.hpp"

namespace vsi {

namespace {

using LD = long double;
using LMat = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<LD, Eigen::Dynamic, 1>;

// One real coordinate: diagonal entry, or real / imaginary part of (i, j), i < j.
struct Coord {
    Eigen::Index i, j;
    int kind; // 0 diag, 1 real, 2 imag
};

std::vector<Coord> hermitian_coords(const std::vector<Eigen::Index>& blocks) {
    std::vector<Coord> c;
    Eigen::Index off = 0;
    for (Eigen::Index s : blocks) {
        for (Eigen::Index i = 0; i < s; ++i) c.push_back({off + i, off + i, 0});
        for (Eigen::Index i = 0; i < s; ++i)
            for (Eigen::Index j = i + 1; j < s; ++j) {
                c.push_back({off + i, off + j, 1});
                c.push_back({off + i, off + j, 2});
            }
        off += s;
    }
    return c;
}

LD coord_of(const CMat& a, const Coord& c) {
    const cplx v = a(c.i, c.j);
    return c.kind == 2 ? LD(v.imag()) : LD(v.real());
}

// Columns of L hit by the basis matrix of coordinate c, with weights.
// diag: E_ii; real: E_ij + E_ji; imag: i (E_ij - E_ji).
CVec apply_basis(const CMat& l, Eigen::Index m, const Coord& c) {
    const Eigen::Index ij = c.j * m + c.i; // column index of E_ij
    const Eigen::Index ji = c.i * m + c.j;
    if (c.kind == 0) return l.col(ij);
    if (c.kind == 1) return l.col(ij) + l.col(ji);
    return cplx(0.0, 1.0) * (l.col(ij) - l.col(ji));
}

void fix_trace(LMat& p, const LVec& t, const LVec& u) {
    const Eigen::Matrix<LD, 1, Eigen::Dynamic> tp = t.transpose() * p;
    p.noalias() += u * (t.transpose() - tp);
}

} // namespace

double max_stable_step(const CMat& l) {
    const double norm = l.cwiseAbs().rowwise().sum().maxCoeff();
    return norm > 0.0 ? 0.1 / norm : std::numeric_limits<double>::infinity();
}

PropagationResult propagate(const CMat& l, const CMat& rho0, double t_final, double dt) {
    const auto m = rho0.rows();
    if (rho0.cols() != m || l.rows() != m * m || l.cols() != m * m)
        throw std::invalid_argument("propagate: dimension mismatch");
    if (!(t_final >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("propagate: need t_final >= 0, dt > 0");
    if (dt > max_stable_step(l)) throw StepTooLarge("dt exceeds 0.1 / ||L||_inf");

    std::vector<Eigen::Index> blocks = m == kFullDim ? std::vector<Eigen::Index>{8, 8, 2}
                                                     : std::vector<Eigen::Index>{m};
    // rho0 must live in the block-diagonal Hermitian subspace
    const double scale = std::max(1.0, rho0.cwiseAbs().maxCoeff());
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("propagate: rho0 is not Hermitian");
    {
        CMat off = rho0;
        Eigen::Index o = 0;
        for (auto s : blocks) {
            off.block(o, o, s, s).setZero();
            o += s;
        }
        if (off.cwiseAbs().maxCoeff() != 0.0)
            throw std::invalid_argument("propagate: rho0 has inter-block coherences");
    }

    const auto coords = hermitian_coords(blocks);
    const auto n = static_cast<Eigen::Index>(coords.size());

    LVec x(n), t = LVec::Zero(n), u = LVec::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        x(k) = coord_of(rho0, coords[k]);
        if (coords[k].kind == 0) {
            t(k) = 1;
            u(k) = LD(1) / LD(m);
        }
    }
    const LD trace0 = t.dot(x);

    PropagationResult res;
    if (t_final == 0.0) {
        res.rho = rho0;
        return res;
    }

    // generator in real coordinates
    LMat r(n, n);
    double leak = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const CMat out = unvectorize(apply_basis(l, m, coords[k]));
        for (Eigen::Index q = 0; q < n; ++q) r(q, k) = coord_of(out, coords[q]);
        CMat rest = out;
        Eigen::Index o = 0;
        for (auto s : blocks) {
            rest.block(o, o, s, s).setZero();
            o += s;
        }
        leak = std::max(leak, rest.cwiseAbs().maxCoeff());
    }
    if (leak > 1e-12 * std::max(1.0, l.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("propagate: generator couples the blocks");

    const LD steps_ld = std::ceil(LD(t_final) / LD(dt));
    if (steps_ld > LD(1e19)) throw std::invalid_argument("propagate: too many steps");
    std::uint64_t steps = static_cast<std::uint64_t>(steps_ld);
    const LD h = LD(t_final) / LD(steps);

    const LMat id = LMat::Identity(n, n);
    const LMat a = h * r;
    LMat p = id + a / LD(4);
    p = id + a * p / LD(3);
    p = id + a * p / LD(2);
    p = id + a * p;
    fix_trace(p, t, u);

    std::uint64_t rem = steps;
    while (rem > 0) {
        if (rem & 1u) x = p * x;
        rem >>= 1u;
        if (rem > 0) {
            const LMat sq = p * p;
            p = sq;
            fix_trace(p, t, u);
        }
    }

    CMat rho = CMat::Zero(m, m);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& c = coords[k];
        const double v = static_cast<double>(x(k));
        if (c.kind == 0) rho(c.i, c.i) = v;
        else if (c.kind == 1) {
            rho(c.i, c.j) += v;
            rho(c.j, c.i) += v;
        } else {
            rho(c.i, c.j) += cplx(0.0, v);
            rho(c.j, c.i) += cplx(0.0, -v);
        }
    }
    res.rho = rho;
    res.trace_drift = static_cast<double>(std::abs(t.dot(x) - trace0));
    res.steps = steps;
    res.dt_used = static_cast<double>(h);
    return res;
}

} // namespace vsi

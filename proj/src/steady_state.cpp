#include "vsi/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vsi/errors.hpp"

namespace vsi {

namespace {

Eigen::Index matrix_dim(const CMat& l) {
    const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(l.rows()))));
    if (l.rows() != l.cols() || m * m != l.rows())
        throw std::invalid_argument("Liouvillian must be square with side M^2");
    return m;
}

// b - A x evaluated with long double accumulation.
CVec residual(const CMat& a, const CVec& x, const CVec& b) {
    CVec r(b.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        std::complex<long double> s = b(i);
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            s -= std::complex<long double>(a(i, j)) * std::complex<long double>(x(j));
        r(i) = cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
    return r;
}

SteadyState finish(const CMat& l, const CVec& x, double rcond, int constraints) {
    SteadyState out;
    CMat rho = unvectorize(x);
    out.diag.asymmetry_pre = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    out.rho = rho;
    out.diag.residual_inf = (l * vectorize(rho)).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    out.diag.min_eigenvalue = es.eigenvalues().minCoeff();
    out.diag.positivity_warning = out.diag.min_eigenvalue < -1e-8;
    out.diag.rcond = rcond;
    out.diag.constraints = constraints;
    return out;
}

CVec solve_bordered(const CMat& a, const CVec& b, const SolveOptions& opt, double& rcond) {
    Eigen::PartialPivLU<CMat> lu(a);
    rcond = lu.rcond();
    if (!(rcond >= opt.rcond_threshold))
        throw SingularSystem("steady-state system is numerically singular (rcond " +
                             std::to_string(rcond) + ")");
    CVec x = lu.solve(b);
    for (int k = 0; k < opt.refinement_steps; ++k) x += lu.solve(residual(a, x, b));
    if (!x.allFinite()) throw SingularSystem("steady-state solve produced non-finite values");
    return x;
}

} // namespace

SteadyState solve_steady_state(const CMat& l, const SolveOptions& opt) {
    const Eigen::Index m = matrix_dim(l);
    const Eigen::Index n = m * m;
    const Eigen::Index row = opt.replaced_row < 0 ? n - 1 : opt.replaced_row;
    if (row >= n) throw std::invalid_argument("replaced row out of range");
    // Only population rows are linearly dependent on the rest; replacing a coherence
    // row leaves the trace-row dependency in place and the system singular.
    if (row % (m + 1) != 0)
        throw std::invalid_argument("replaced row must be a population (diagonal) row");

    CMat a = l;
    a.row(row).setZero();
    for (Eigen::Index i = 0; i < m; ++i) a(row, i * m + i) = 1.0;
    CVec b = CVec::Zero(n);
    b(row) = 1.0;

    double rcond = 0.0;
    const CVec x = solve_bordered(a, b, opt, rcond);
    return finish(l, x, rcond, 1);
}

SteadyState solve_steady_state(const CMat& l, const std::vector<CMat>& conserved,
                               const SolveOptions& opt) {
    if (conserved.size() <= 1) return solve_steady_state(l, opt);
    const Eigen::Index m = matrix_dim(l);
    const Eigen::Index n = m * m;
    const auto k = static_cast<Eigen::Index>(conserved.size());

    // Constraint functionals: Tr(Q rho) = vec(Q^T) . vec(rho)
    CMat y(n, k);
    CVec target(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const CMat& q = conserved[static_cast<size_t>(c)];
        if (q.rows() != m || q.cols() != m)
            throw std::invalid_argument("conserved observable has wrong dimension");
        y.col(c) = vectorize(q.transpose());
        target(c) = q.trace() / static_cast<double>(m);
    }

    // Rows of L to replace: where the left null vectors are best conditioned.
    Eigen::ColPivHouseholderQR<CMat> qr(y.transpose());
    const auto& perm = qr.colsPermutation().indices();

    CMat a = l;
    CVec b = CVec::Zero(n);
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::Index row = perm(c);
        a.row(row) = y.col(c).transpose();
        b(row) = target(c);
    }
    double rcond = 0.0;
    const CVec x = solve_bordered(a, b, opt, rcond);
    return finish(l, x, rcond, static_cast<int>(k));
}

std::vector<CMat> conserved_nuclear_observables(const BlockHamiltonian& h, double tol) {
    const CMat* blocks[] = {&h.h_gs, &h.h_es, &h.h_ms};
    Eigen::Index rows = 0;
    double scale = 1.0;
    for (const CMat* b : blocks) {
        rows += b->size();
        scale = std::max(scale, b->cwiseAbs().maxCoeff());
    }

    // columns: commutators [h_block, 1 (x) E_ab] for the four 2x2 units
    CMat cmap = CMat::Zero(rows, 4);
    std::vector<Eigen::Matrix2cd> units(4, Eigen::Matrix2cd::Zero());
    for (int u = 0; u < 4; ++u) {
        units[u](u / 2, u % 2) = 1.0;
        Eigen::Index off = 0;
        for (const CMat* b : blocks) {
            const Eigen::Index d = b->rows() / 2;
            const CMat q = kron(CMat::Identity(d, d), units[u]);
            const CMat c = (*b) * q - q * (*b);
            cmap.block(off, u, c.size(), 1) = Eigen::Map<const CVec>(c.data(), c.size());
            off += c.size();
        }
    }

    Eigen::JacobiSVD<CMat> svd(cmap, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    std::vector<CMat> out;
    for (int c = 0; c < 4; ++c) {
        const double sv = c < s.size() ? s(c) : 0.0;
        if (sv > tol * scale) continue;
        const CVec v = svd.matrixV().col(c);
        Eigen::Matrix2cd nmat = Eigen::Matrix2cd::Zero();
        for (int u = 0; u < 4; ++u) nmat += v(u) * units[u];
        out.push_back(kron(CMat::Identity(9, 9), nmat));
    }
    return out;
}

SteadyState solve_cycle(const BlockHamiltonian& h, const std::vector<JumpOperator>& jumps,
                        const SolveOptions& opt) {
    const CMat l = assemble_liouvillian(h, jumps);
    return solve_steady_state(l, conserved_nuclear_observables(h), opt);
}

} // namespace vsi

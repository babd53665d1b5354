// spin_algebra.hpp - spin matrices, Kronecker products and projectors for the
// quartet electron (x) spin-1/2 nucleus space.
#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace vsi {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct SpinOperatorSet {
    double s{0.0};
    CMat sx, sy, sz, s_plus, s_minus;
    int dim() const { return static_cast<int>(sz.rows()); }
};

// Basis ordered |s>, |s-1>, ..., |-s>. Only s = 1/2 and 3/2 are accepted.
SpinOperatorSet build_spin_operators(double s);

// Left factor is the slow (outer) index.
CMat kron(const CMat& a, const CMat& b);

// Full space: GS (8) + ES (8) + MS (2). Inside GS/ES the electron spin runs
// 3/2 .. -3/2 and the nucleus (alpha, beta) is the fast index.
inline constexpr int kStateDim = 8;
inline constexpr int kFullDim = 18;

enum class Block { GS, ES, MS };
enum class SpinGroup { Half, ThreeHalves };

int block_offset(Block b);

// nuc: 0 = alpha (Iz = +1/2), 1 = beta.
int basis_index(Block b, double sz, int nuc);
// Index inside an 8-dim GS/ES block.
int local_index(double sz, int nuc);

std::string basis_label(int full_index);

// 18x18 projector onto {|+-1/2>} or {|+-3/2>} of GS/ES, identity on the nucleus.
CMat projector(Block b, SpinGroup group);
// 18x18 projector onto a single Sz value of GS/ES.
CMat projector(Block b, double sz);

} // namespace vsi

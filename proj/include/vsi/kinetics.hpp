// kinetics.hpp - jump operators of the optical cycle and the Liouvillian.
#pragma once

#include <string>
#include <vector>

#include "vsi/hamiltonians.hpp"

namespace vsi {

// Rates in ns^-1.
struct RateScheme {
    double pump_i{0.01};
    double k1_fl{0.05};   // ES |+-1/2> -> GS |+-1/2>
    double k2_fl{0.1};    // ES |+-3/2> -> GS |+-3/2>
    double k1_isc{0.2};   // ES |+-1/2> -> MS
    double k2_isc{0.01};  // ES |+-3/2> -> MS
    double kprime_isc{0.01}; // MS -> GS |+-1/2>
};

// Which ISC rate drains which ES spin group. ByGroup: k1_isc leaves |+-1/2>,
// k2_isc leaves |+-3/2>. Swapped exchanges the two.
enum class IscAssignment { ByGroup, Swapped };

struct JumpOperator {
    int from{0}, to{0}; // electronic levels 0..8 (GS 3/2..-3/2, ES 3/2..-3/2, MS)
    double rate{0.0};
    std::string label;
    CMat op; // 18x18, sqrt(rate) |to><from| (x) 1_nuc
};

void validate(const RateScheme& r);

// 9x9 electronic matrix of sqrt(rate) with element (to, from).
Eigen::MatrixXd electronic_rate_matrix(const RateScheme& r,
                                       IscAssignment isc = IscAssignment::ByGroup);

// One rank-one operator per nonzero entry of the electronic matrix.
std::vector<JumpOperator> build_jump_operators(const RateScheme& r,
                                               IscAssignment isc = IscAssignment::ByGroup);

// Column-stacking superoperator
//   L = -i(1 (x) H - H^T (x) 1) + sum_J [ conj(J) (x) J - 1/2 1 (x) J^dag J - 1/2 (J^dag J)^T (x) 1 ].
CMat assemble_liouvillian(const CMat& h, const std::vector<CMat>& jumps);
CMat assemble_liouvillian(const BlockHamiltonian& h, const std::vector<JumpOperator>& jumps);

// vec(rho) with column stacking and its inverse.
CVec vectorize(const CMat& rho);
CMat unvectorize(const CVec& v);

} // namespace vsi

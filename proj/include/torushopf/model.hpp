#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "torushopf/lattice.hpp"

namespace torushopf {

using CouplingMatrix = Eigen::SparseMatrix<double>;

// Vector field of the coupled lattice.
//
// VdpBidirectionalY (per node, neighbours along each axis in y):
//   x' = nu*(a*x - x^3) - (C y),   y' = b*x
// with C = I + delta*L1 + zeta*L2 + epsilon*L3, L_i the periodic second
// difference along axis i (diagonal 2, both neighbours -1).
//
// VdplUnidirectionalX (forward neighbour only, coupling in x):
//   x' = a*x - y - x^3 - x^2 - (C x),   y' = b*x
// with C = delta*(I-S1) + zeta*(I-S2) + epsilon*(I-S3), S_i the forward
// shift along axis i.
LatticeState rhs(const LatticeParams& p, const LatticeState& s);

// Same field on the stacked vector [x; y]; no allocation beyond `out`.
void rhs_stacked(const LatticeParams& p, const Eigen::VectorXd& v,
                 Eigen::VectorXd& out);

// Exact Jacobian of rhs at `s`, dense 2n^3 x 2n^3, blocks ordered [x; y].
Eigen::MatrixXd jacobian(const LatticeParams& p, const LatticeState& s);

// The linear coupling operator C described above (n^3 x n^3, <= 7 entries
// per row).
CouplingMatrix coupling_matrix(const LatticeParams& p);

}  // namespace torushopf

// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_DTN_HPP
#define GIBC_DTN_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace gibc {

// Truncated Dirichlet-to-Neumann map on the circle |x| = R for outgoing
// Helmholtz solutions: mode n maps through s_n = k H1'_{|n|}(kR) / H1_{|n|}(kR).
struct DtnOperator {
  double k = 0.0;
  double R = 0.0;
  int order = 0;                               // modes |n| <= order
  std::vector<std::complex<double>> symbols;   // s_0 .. s_order
  std::vector<double> angles;                  // circle node angles theta_p
  std::vector<double> weights;                 // arclength quadrature weights

  int n_nodes() const { return static_cast<int>(angles.size()); }
};

std::complex<double> dtn_symbol(int n, double k, double R);

// Default truncation order ceil(kR) + 15; the symbol tail beyond kR decays
// fast enough that two extra digits of margin cost nothing.
int default_dtn_order(double k, double R);

// Throws aliasing_error unless the node count is at least 2*order + 1.
DtnOperator make_dtn_operator(double k, double R, int order, std::vector<double> angles,
                              std::vector<double> weights);

// Dense block M with v^H M u ~= integral over |x|=R of (S_R u) conj(v) ds for
// nodal samples u, v.  Complex symmetric (M = M^T without conjugation).
Eigen::MatrixXcd build_dtn_block(const DtnOperator& op);

}  // namespace gibc

#endif  // GIBC_DTN_HPP

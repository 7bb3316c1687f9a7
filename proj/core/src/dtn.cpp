// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include "gibc/dtn.hpp"

#include <cmath>
#include <stdexcept>

#include "gibc/errors.hpp"
#include "gibc/specfun.hpp"

namespace gibc {

std::complex<double> dtn_symbol(int n, double k, double R) {
  if (!(k > 0.0) || !(R > 0.0)) throw std::domain_error("dtn_symbol: k and R must be positive");
  const int m = std::abs(n);
  const auto t = specfun::bessel_jy(m, k * R);
  return k * t.h1p(m) / t.h1(m);
}

int default_dtn_order(double k, double R) {
  return static_cast<int>(std::ceil(k * R)) + 15;
}

DtnOperator make_dtn_operator(double k, double R, int order, std::vector<double> angles,
                              std::vector<double> weights) {
  if (!(k > 0.0) || !(R > 0.0))
    throw std::domain_error("make_dtn_operator: k and R must be positive");
  if (order < 0) throw std::domain_error("make_dtn_operator: order must be non-negative");
  if (angles.size() != weights.size())
    throw shape_mismatch("make_dtn_operator: angle and weight counts differ");
  if (static_cast<int>(angles.size()) < 2 * order + 1)
    throw aliasing_error("make_dtn_operator: need at least 2*order+1 circle nodes, got " +
                         std::to_string(angles.size()));

  DtnOperator op;
  op.k = k;
  op.R = R;
  op.order = order;
  op.angles = std::move(angles);
  op.weights = std::move(weights);
  const auto t = specfun::bessel_jy(order, k * R);
  op.symbols.resize(order + 1);
  for (int n = 0; n <= order; ++n) op.symbols[n] = k * t.h1p(n) / t.h1(n);
  return op;
}

Eigen::MatrixXcd build_dtn_block(const DtnOperator& op) {
  const int nc = op.n_nodes();
  const double inv = 1.0 / (2.0 * M_PI * op.R);
  Eigen::MatrixXcd block(nc, nc);
  for (int p = 0; p < nc; ++p) {
    for (int q = 0; q <= p; ++q) {
      const double d = op.angles[p] - op.angles[q];
      std::complex<double> kernel = op.symbols[0];
      for (int n = 1; n <= op.order; ++n) kernel += 2.0 * std::cos(n * d) * op.symbols[n];
      const std::complex<double> val = op.weights[p] * op.weights[q] * inv * kernel;
      block(p, q) = val;
      block(q, p) = val;
    }
  }
  return block;
}

}  // namespace gibc

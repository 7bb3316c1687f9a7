// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_SPECFUN_HPP
#define GIBC_SPECFUN_HPP

#include <complex>
#include <vector>

namespace gibc::specfun {

// Cylinder function table at a fixed argument x: values and first derivatives
// of J_n and Y_n for n = 0..n_max.
struct CylFunValue {
  double x = 0.0;
  std::vector<double> j;       // J_n(x)
  std::vector<double> y;       // Y_n(x)
  std::vector<double> jp;      // J_n'(x)
  std::vector<double> yp;      // Y_n'(x)

  int order() const { return static_cast<int>(j.size()) - 1; }

  std::complex<double> h1(int n) const { return {j[n], y[n]}; }
  std::complex<double> h1p(int n) const { return {jp[n], yp[n]}; }
};

// Computes J_n and Y_n together with derivatives for n = 0..n_max.
//
// J_n comes from Miller's backward recurrence normalized with
// J_0 + 2*sum_m J_{2m} = 1; Y_0 and Y_1 come from power series for small x and
// from the Hankel asymptotic expansion for large x, the remaining orders from
// forward recurrence.  Derivatives use J_n' = J_{n-1} - (n/x) J_n (same for Y),
// with J_0' = -J_1.
//
// Throws std::domain_error for x <= 0 or invalid n_max, std::overflow_error if
// Y_n leaves the representable range.
CylFunValue bessel_jy(int n_max, double x);

// Convenience accessors used by the scattering code.  |n| handling is the
// caller's job; these only see non-negative orders.
std::complex<double> hankel1(int n, double x);
std::complex<double> hankel1_deriv(int n, double x);

}  // namespace gibc::specfun

#endif  // GIBC_SPECFUN_HPP

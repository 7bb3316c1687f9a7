// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_MIE_HPP
#define GIBC_MIE_HPP

#include <complex>
#include <vector>

#include "gibc/farfield.hpp"

namespace gibc {

// Semi-analytic scattering by the impedance circle of radius a.  The total
// field is u = u^i + sum_n c_n H1_n(k r) e^{i n (theta - theta_d)} with
//   c_n = -i^n [k J_n'(ka) + Z_n J_n(ka)] / [k H1_n'(ka) + Z_n H1_n(ka)],
//   Z_n = lambda_eff - mu_eff n^2 / a^2,
// where (lambda_eff, mu_eff) = (k lambda, mu / k) in rescaled mode.  Shares
// only the cylinder-function backend with the finite element path.
struct MieSolution {
  double a = 0.0;
  double k = 0.0;
  Complex lambda{0.0, 0.0};
  Complex mu{0.0, 0.0};
  bool rescaled = false;
  std::vector<Complex> coeffs;  // c_0 .. c_nmax; c_{-n} = (-1)^n c_n

  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
};

// n_max < 0 selects ceil(ka) + 20.  enforce_h = false admits coefficient
// pairs outside assumption H (sound-hard limit checks).
MieSolution mie_solve(double a, double k, Complex lambda, Complex mu, bool rescaled,
                      int n_max = -1, bool enforce_h = true);

// u_inf(xhat) = sqrt(2/(pi k)) e^{-i pi/4} sum_n c_n (-i)^n e^{i n (t - t_d)}.
std::vector<Complex> mie_farfield_at(const MieSolution& sol, double incident_angle,
                                     const std::vector<double>& angles);

FarFieldData mie_farfield(const MieSolution& sol, const std::vector<double>& incident_angles,
                          const DirectionSet& dirs);

// Total field on the obstacle boundary r = a.
std::vector<Complex> mie_boundary_trace(const MieSolution& sol, double incident_angle,
                                        const std::vector<double>& thetas);

}  // namespace gibc

#endif  // GIBC_MIE_HPP

// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include "gibc/mie.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gibc/errors.hpp"
#include "gibc/specfun.hpp"

namespace gibc {

namespace {

// i^n for signed n; period 4.
Complex ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

MieSolution mie_solve(double a, double k, Complex lambda, Complex mu, bool rescaled,
                      int n_max, bool enforce_h) {
  if (a <= 0.0 || k <= 0.0) throw std::domain_error("mie_solve: a and k must be positive");
  if (enforce_h) {
    if (lambda.imag() < 0.0) throw constraint_violation("mie_solve: Im lambda < 0");
    if (mu.imag() > 0.0) throw constraint_violation("mie_solve: Im mu > 0");
  }
  if (n_max < 0) n_max = static_cast<int>(std::ceil(k * a)) + 20;

  const Complex lam_eff = rescaled ? k * lambda : lambda;
  const Complex mu_eff = rescaled ? mu / k : mu;

  const specfun::CylFunValue cf = specfun::bessel_jy(n_max, k * a);
  MieSolution sol;
  sol.a = a;
  sol.k = k;
  sol.lambda = lambda;
  sol.mu = mu;
  sol.rescaled = rescaled;
  sol.coeffs.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Complex zn = lam_eff - mu_eff * static_cast<double>(n) * static_cast<double>(n) / (a * a);
    const Complex num = k * cf.jp[n] + zn * cf.j[n];
    const Complex den = k * cf.h1p(n) + zn * cf.h1(n);
    if (std::abs(den) == 0.0) throw singular_matrix_error("mie_solve: resonant denominator");
    sol.coeffs[n] = -ipow(n) * num / den;
  }
  return sol;
}

std::vector<Complex> mie_farfield_at(const MieSolution& sol, double incident_angle,
                                     const std::vector<double>& angles) {
  const double c = std::sqrt(2.0 / (std::numbers::pi * sol.k));
  const Complex phase = std::polar(1.0, -std::numbers::pi / 4.0);
  std::vector<Complex> out(angles.size());
  for (std::size_t q = 0; q < angles.size(); ++q) {
    const double d = angles[q] - incident_angle;
    // c_{-n} (-i)^{-n} e^{-ind} = c_n (-i)^n e^{-ind}: signed modes pair up.
    Complex acc = sol.coeffs[0];
    for (int n = 1; n <= sol.n_max(); ++n) {
      acc += sol.coeffs[n] * ipow(-n) * (2.0 * std::cos(n * d));
    }
    out[q] = c * phase * acc;
  }
  return out;
}

FarFieldData mie_farfield(const MieSolution& sol, const std::vector<double>& incident_angles,
                          const DirectionSet& dirs) {
  if (incident_angles.size() != dirs.n_apertures()) {
    throw shape_mismatch("mie_farfield: one aperture per incident wave required");
  }
  FarFieldData data;
  data.k = sol.k;
  data.incident_angles = incident_angles;
  data.dirs = dirs;
  data.provenance = FarFieldData::Provenance::Computed;
  data.samples.resize(incident_angles.size());
  for (std::size_t j = 0; j < incident_angles.size(); ++j) {
    const auto vals = mie_farfield_at(sol, incident_angles[j], dirs.apertures[j].angles);
    data.samples[j] = Eigen::Map<const Eigen::VectorXcd>(vals.data(),
                                                         static_cast<Eigen::Index>(vals.size()));
  }
  return data;
}

std::vector<Complex> mie_boundary_trace(const MieSolution& sol, double incident_angle,
                                        const std::vector<double>& thetas) {
  const specfun::CylFunValue cf = specfun::bessel_jy(sol.n_max(), sol.k * sol.a);
  std::vector<Complex> out(thetas.size());
  for (std::size_t q = 0; q < thetas.size(); ++q) {
    const double d = thetas[q] - incident_angle;
    Complex acc = cf.j[0] + sol.coeffs[0] * cf.h1(0);
    for (int n = 1; n <= sol.n_max(); ++n) {
      // i^{-n} J_{-n} = i^n J_n and c_{-n} H1_{-n} = c_n H1_n: even in n.
      acc += (ipow(n) * cf.j[n] + sol.coeffs[n] * cf.h1(n)) * (2.0 * std::cos(n * d));
    }
    out[q] = acc;
  }
  return out;
}

}  // namespace gibc

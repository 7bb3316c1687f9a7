// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_FARFIELD_HPP
#define GIBC_FARFIELD_HPP

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gibc/assembly.hpp"

namespace gibc {

// Measurement arc for one incident wave: angles and trapezoid quadrature
// weights; a full-circle aperture uses the periodic rule instead.
struct Aperture {
  double center = 0.0;
  double width = 0.0;
  bool full = false;
  std::vector<double> angles;
  std::vector<double> weights;

  int m() const { return static_cast<int>(angles.size()); }
};

struct DirectionSet {
  std::vector<Aperture> apertures;

  static DirectionSet full_circle(int m);
  // One aperture of the given width per center, m directions each, trapezoid
  // weights including both arc endpoints.
  static DirectionSet tiled(const std::vector<double>& centers, double width, int m);

  int n_apertures() const { return static_cast<int>(apertures.size()); }
};

// Far-field samples, one block per incident direction, measured on the
// matching aperture of the DirectionSet.
struct FarFieldData {
  enum class Provenance : unsigned char { Computed, SyntheticClean, SyntheticNoisy };

  double k = 0.0;
  std::vector<double> incident_angles;
  DirectionSet dirs;
  std::vector<Eigen::VectorXcd> samples;
  Provenance provenance = Provenance::Computed;
};

// Spectral far-field evaluation from the scattered circle trace:
// u_inf(t) = sum_n c_n gamma_n e^{i n t} with
// gamma_n = sqrt(2/(pi k)) e^{-i pi/4} (-i)^n / H1_n(kR).
std::vector<Complex> farfield_at(const ScatterSystem& system, const FieldSolution& sol,
                                 const std::vector<double>& angles);

// Direct quadrature of the far-field representation formula over |y| = R,
// with d_nu u^s reconstructed mode-wise.  Slower; kept as the independent
// cross-check of the gamma_n normalization.
std::vector<Complex> farfield_quadrature(const ScatterSystem& system, const FieldSolution& sol,
                                         const std::vector<double>& angles);

// One solved wave per aperture of `dirs`.
FarFieldData farfield_from_traces(const ScatterSystem& system,
                                  const std::vector<FieldSolution>& sols,
                                  const std::vector<double>& incident_angles,
                                  const DirectionSet& dirs);

// Far-field kernel Phi_inf(y, xhat) = e^{i pi/4} / sqrt(8 pi k) e^{-i k y.xhat}.
Complex farfield_kernel(double k, const Vec2& y, double obs_angle);

// Herglotz superposition G^i(y) = int_S Phi_inf(y, xhat) conj(r(xhat)) ds(xhat)
// evaluated (with radial derivatives) at the given points; drives the adjoint
// right-hand side.
IncidentSamples herglotz_samples(double k, const Aperture& aperture,
                                 const Eigen::VectorXcd& residual,
                                 const std::vector<Vec2>& points);

struct MisfitResult {
  std::vector<Eigen::VectorXcd> residuals;  // computed - observed, per wave
  double F = 0.0;                           // 1/2 sum_j |r_j|^2_{L2(S_j)}
  double norm_obs_sq = 0.0;                 // sum_j |obs_j|^2_{L2(S_j)}
  std::optional<double> error;              // sqrt(2F / norm_obs_sq); empty if obs ~ 0
};

MisfitResult misfit(const FarFieldData& computed, const FarFieldData& observed);

// Per-aperture complex Gaussian noise rescaled so that the relative L2(S_j)
// perturbation equals sigma exactly.  sigma = 0 returns an identical copy.
FarFieldData apply_noise(const FarFieldData& data, double sigma, unsigned long long seed);

void write_farfield(const FarFieldData& data, std::ostream& os);
FarFieldData read_farfield(std::istream& is);

}  // namespace gibc

#endif  // GIBC_FARFIELD_HPP

// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gibc/assembly.hpp"
#include "gibc/errors.hpp"
#include "gibc/farfield.hpp"
#include "gibc/geometry.hpp"
#include "gibc/mie.hpp"
#include "oracles.hpp"

using namespace gibc;

namespace {
constexpr double kPi = 3.14159265358979323846;

double weighted_norm_sq(const Eigen::VectorXcd& v, const std::vector<double>& w) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += w[i] * std::norm(v[i]);
  return s;
}

// Small forward solve shared by several cases.
struct Setup {
  std::shared_ptr<AnnulusMesh> mesh;
  std::unique_ptr<ScatterSystem> sys;
  FieldSolution sol;
};

Setup make_setup(double k = 9.0) {
  Setup s;
  const int nb = 128;
  const BoundaryCurve curve = make_ellipse(0.35, 0.35, nb);
  s.mesh = std::make_shared<AnnulusMesh>(build_annulus_mesh(curve, 0.8, 12, 1.0));
  s.sys = make_scatter_system(s.mesh, curve,
                              constant_impedance(nb, Complex(0.0, 0.5), Complex(1.0, 0.0)), k,
                              false);
  s.sol = solve_plane_wave(*s.sys, 0.0);
  return s;
}

FarFieldData small_mie_data(double sigma = 0.0, unsigned long long seed = 1) {
  const MieSolution mie = mie_solve(0.35, 9.0, Complex(0.0, 0.5), Complex(1.0, 0.0), false);
  DirectionSet dirs = DirectionSet::tiled({0.0, kPi / 2, kPi, 3 * kPi / 2}, kPi / 2, 16);
  FarFieldData data = mie_farfield(mie, {0.0, kPi / 2, kPi, 3 * kPi / 2}, dirs);
  if (sigma > 0.0) data = apply_noise(data, sigma, seed);
  return data;
}
}  // namespace

TEST_CASE("aperture weights integrate the arc") {
  const int N = 10, m = 20;
  std::vector<double> centers(N);
  for (int j = 0; j < N; ++j) centers[j] = 2.0 * kPi * j / N;
  const DirectionSet dirs = DirectionSet::tiled(centers, 2.0 * kPi / N, m);
  REQUIRE(dirs.n_apertures() == N);
  double total = 0.0;
  for (const Aperture& ap : dirs.apertures) {
    REQUIRE(ap.m() == m);
    CHECK_FALSE(ap.full);
    double s = 0.0;
    for (double w : ap.weights) s += w;
    CHECK(s == doctest::Approx(2.0 * kPi / N).epsilon(1e-14));
    CHECK(ap.angles.front() == doctest::Approx(ap.center - kPi / N).epsilon(1e-14));
    CHECK(ap.angles.back() == doctest::Approx(ap.center + kPi / N).epsilon(1e-14));
    total += s;
  }
  CHECK(total == doctest::Approx(2.0 * kPi).epsilon(1e-14));

  const DirectionSet full = DirectionSet::full_circle(64);
  REQUIRE(full.n_apertures() == 1);
  CHECK(full.apertures[0].full);
  for (double w : full.apertures[0].weights) {
    CHECK(w == doctest::Approx(2.0 * kPi / 64).epsilon(1e-14));
  }
}

TEST_CASE("zero scattered trace radiates nothing") {
  Setup s = make_setup();
  IncidentSamples zero;
  const int nb = s.sys->dtn().n_nodes();
  zero.values = Eigen::VectorXcd::Zero(nb);
  zero.radial_derivs = Eigen::VectorXcd::Zero(nb);
  const FieldSolution sol0 =
      solve_forward(*s.sys, Eigen::VectorXcd::Zero(s.sys->n_dofs()), &zero, 0.0);
  const auto ff = farfield_at(*s.sys, sol0, oracle::uniform_angles(32));
  for (const Complex& v : ff) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("spectral and quadrature far fields agree") {
  Setup s = make_setup();
  const std::vector<double> angles = oracle::uniform_angles(90);
  const auto spectral = farfield_at(*s.sys, s.sol, angles);
  const auto quadrature = farfield_quadrature(*s.sys, s.sol, angles);
  CHECK(oracle::rel_l2(spectral, quadrature) <= 1e-8);
}

TEST_CASE("far-field kernel closed form") {
  const double k = 9.0;
  const Vec2 y(0.31, -0.22);
  const double t = 1.1;
  const Complex expect = std::exp(Complex(0.0, kPi / 4)) / std::sqrt(8.0 * kPi * k) *
                         std::exp(Complex(0.0, -k * (y.x() * std::cos(t) + y.y() * std::sin(t))));
  CHECK(std::abs(farfield_kernel(k, y, t) - expect) <= 1e-15);
}

TEST_CASE("herglotz samples: single direction and zero residual") {
  const double k = 9.0;
  Aperture ap;
  ap.center = 0.7;
  ap.width = 0.0;
  ap.angles = {0.7};
  ap.weights = {0.35};
  const std::vector<Vec2> pts = {Vec2(0.4, 0.1), Vec2(-0.3, 0.5), Vec2(0.0, -0.6)};

  Eigen::VectorXcd r(1);
  r[0] = Complex(0.8, -0.3);
  const IncidentSamples g = herglotz_samples(k, ap, r, pts);
  REQUIRE(g.values.size() == 3);
  for (int i = 0; i < 3; ++i) {
    const Complex expect = ap.weights[0] * farfield_kernel(k, pts[i], ap.angles[0]) *
                           std::conj(r[0]);
    CHECK(std::abs(g.values[i] - expect) <= 1e-15);
    const double radial =
        (pts[i].x() * std::cos(ap.angles[0]) + pts[i].y() * std::sin(ap.angles[0])) /
        pts[i].norm();
    const Complex dexpect = Complex(0.0, -k) * radial * expect;
    CHECK(std::abs(g.radial_derivs[i] - dexpect) <= 1e-14);
  }

  const IncidentSamples z = herglotz_samples(k, ap, Eigen::VectorXcd::Zero(1), pts);
  CHECK(z.values.norm() == 0.0);
  CHECK(z.radial_derivs.norm() == 0.0);
}

TEST_CASE("herglotz wave of a constant residual is a Bessel beam") {
  const double k = 9.0, r_pt = 0.55;
  const DirectionSet dirs = DirectionSet::full_circle(256);
  const Complex res_val(0.4, 1.1);
  const Eigen::VectorXcd residual = Eigen::VectorXcd::Constant(256, res_val);
  std::vector<Vec2> pts;
  for (int i = 0; i < 12; ++i) {
    const double t = 2.0 * kPi * i / 12 + 0.13;
    pts.emplace_back(r_pt * std::cos(t), r_pt * std::sin(t));
  }
  const IncidentSamples g = herglotz_samples(k, dirs.apertures[0], residual, pts);

  const Complex c = std::exp(Complex(0.0, kPi / 4)) / std::sqrt(8.0 * kPi * k);
  const Complex expect_val =
      std::conj(res_val) * c * 2.0 * kPi * oracle::bessel_j_series(0, k * r_pt);
  const Complex expect_der =
      -std::conj(res_val) * c * 2.0 * kPi * k * oracle::bessel_j_series(1, k * r_pt);
  for (int i = 0; i < 12; ++i) {
    CHECK(std::abs(g.values[i] - expect_val) <= 1e-10);
    CHECK(std::abs(g.radial_derivs[i] - expect_der) <= 1e-10);
  }
}

TEST_CASE("misfit identities") {
  const FarFieldData data = small_mie_data();

  const MisfitResult self = misfit(data, data);
  CHECK(self.F == 0.0);
  REQUIRE(self.error.has_value());
  CHECK(*self.error == 0.0);

  FarFieldData doubled = data;
  for (auto& s : doubled.samples) s *= 2.0;
  const MisfitResult twice = misfit(doubled, data);
  REQUIRE(twice.error.has_value());
  CHECK(*twice.error == doctest::Approx(1.0).epsilon(1e-14));
  double norm_sq = 0.0;
  for (std::size_t j = 0; j < data.samples.size(); ++j) {
    norm_sq += weighted_norm_sq(data.samples[j], data.dirs.apertures[j].weights);
  }
  CHECK(twice.F == doctest::Approx(0.5 * norm_sq).epsilon(1e-13));
  CHECK(twice.norm_obs_sq == doctest::Approx(norm_sq).epsilon(1e-13));

  FarFieldData zeros = data;
  for (auto& s : zeros.samples) s.setZero();
  const MisfitResult vs_zero = misfit(data, zeros);
  CHECK_FALSE(vs_zero.error.has_value());
  CHECK(vs_zero.F > 0.0);

  FarFieldData wrong = data;
  wrong.samples.pop_back();
  wrong.incident_angles.pop_back();
  wrong.dirs.apertures.pop_back();
  CHECK_THROWS_AS((void)misfit(wrong, data), shape_mismatch);
}

TEST_CASE("full-circle energy matches the modal sum") {
  const MieSolution mie = mie_solve(0.35, 9.0, Complex(0.0, 0.5), Complex(1.0, 0.0), false);
  const int m = 512;
  const std::vector<double> angles = oracle::uniform_angles(m);
  const auto ff = mie_farfield_at(mie, 0.3, angles);
  double quad = 0.0;
  for (const Complex& v : ff) quad += std::norm(v) * (2.0 * kPi / m);

  double modal = std::norm(mie.coeffs[0]);
  for (int n = 1; n <= mie.n_max(); ++n) modal += 2.0 * std::norm(mie.coeffs[n]);
  modal *= 2.0 * kPi * (2.0 / (kPi * mie.k));
  CHECK(quad == doctest::Approx(modal).epsilon(1e-8));
}

TEST_CASE("far-field file round trip is byte identical") {
  const FarFieldData data = small_mie_data(0.02, 7);
  std::ostringstream first;
  write_farfield(data, first);
  std::istringstream in(first.str());
  const FarFieldData back = read_farfield(in);
  REQUIRE(back.samples.size() == data.samples.size());
  CHECK(back.k == data.k);
  std::ostringstream second;
  write_farfield(back, second);
  CHECK(first.str() == second.str());

  const MisfitResult diff = misfit(back, data);
  REQUIRE(diff.error.has_value());
  CHECK(*diff.error <= 1e-16);
}

TEST_CASE("noise hits the requested level exactly") {
  const FarFieldData clean = small_mie_data();
  const double sigma = 0.03;
  const FarFieldData noisy = apply_noise(clean, sigma, 42);
  CHECK(noisy.provenance == FarFieldData::Provenance::SyntheticNoisy);
  for (std::size_t j = 0; j < clean.samples.size(); ++j) {
    const auto& w = clean.dirs.apertures[j].weights;
    const double num = std::sqrt(weighted_norm_sq(noisy.samples[j] - clean.samples[j], w));
    const double den = std::sqrt(weighted_norm_sq(clean.samples[j], w));
    CHECK(std::abs(num / den - sigma) <= 1e-12);
  }

  const FarFieldData again = apply_noise(clean, sigma, 42);
  for (std::size_t j = 0; j < clean.samples.size(); ++j) {
    for (int q = 0; q < clean.samples[j].size(); ++q) {
      CHECK(again.samples[j][q] == noisy.samples[j][q]);
    }
  }

  const FarFieldData other = apply_noise(clean, sigma, 43);
  double delta = 0.0;
  for (std::size_t j = 0; j < clean.samples.size(); ++j) {
    delta += (other.samples[j] - noisy.samples[j]).norm();
  }
  CHECK(delta > 0.0);

  const FarFieldData copy = apply_noise(clean, 0.0, 99);
  CHECK(copy.provenance == clean.provenance);
  for (std::size_t j = 0; j < clean.samples.size(); ++j) {
    for (int q = 0; q < clean.samples[j].size(); ++q) {
      CHECK(copy.samples[j][q] == clean.samples[j][q]);
    }
  }

  CHECK_THROWS_AS((void)apply_noise(clean, -0.1, 1), std::invalid_argument);
}

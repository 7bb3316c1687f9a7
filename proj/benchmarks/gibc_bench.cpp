// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <complex>
#include <memory>

#include "gibc/assembly.hpp"
#include "gibc/farfield.hpp"
#include "gibc/geometry.hpp"
#include "gibc/inverse.hpp"
#include "gibc/mie.hpp"
#include "gibc/specfun.hpp"

using namespace gibc;

namespace {

struct Forward {
  std::shared_ptr<AnnulusMesh> mesh;
  std::unique_ptr<ScatterSystem> sys;

  Forward(int nb, int nr, double k) {
    const BoundaryCurve curve = make_ellipse(0.4, 0.3, nb);
    mesh = std::make_shared<AnnulusMesh>(build_annulus_mesh(curve, 0.8, nr, 1.15));
    sys = make_scatter_system(mesh, curve,
                              constant_impedance(nb, Complex(0.0, 1.0), Complex(1.0, 0.0)), k,
                              true);
  }
};

void BM_BesselBasis(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_jy(n_max, 19.2));
  }
}
BENCHMARK(BM_BesselBasis)->Arg(25)->Arg(60);

void BM_BuildMesh(benchmark::State& state) {
  const int nb = static_cast<int>(state.range(0));
  const BoundaryCurve curve = make_ellipse(0.4, 0.3, nb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_annulus_mesh(curve, 0.8, nb / 10, 1.15));
  }
}
BENCHMARK(BM_BuildMesh)->Arg(128)->Arg(256);

void BM_AssembleFactorize(benchmark::State& state) {
  const int nb = static_cast<int>(state.range(0));
  const BoundaryCurve curve = make_ellipse(0.4, 0.3, nb);
  const auto mesh =
      std::make_shared<AnnulusMesh>(build_annulus_mesh(curve, 0.8, nb / 10, 1.15));
  const ImpedanceField imp = constant_impedance(nb, Complex(0.0, 1.0), Complex(1.0, 0.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_scatter_system(mesh, curve, imp, 9.0, true));
  }
}
BENCHMARK(BM_AssembleFactorize)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_SolveWave(benchmark::State& state) {
  Forward f(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 10, 9.0);
  double angle = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_plane_wave(*f.sys, angle));
    angle += 0.1;
  }
}
BENCHMARK(BM_SolveWave)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_FarField(benchmark::State& state) {
  Forward f(128, 12, 9.0);
  const FieldSolution sol = solve_plane_wave(*f.sys, 0.0);
  std::vector<double> angles(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < angles.size(); ++i) {
    angles[i] = 6.283185307179586 * static_cast<double>(i) / static_cast<double>(angles.size());
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(farfield_at(*f.sys, sol, angles));
  }
}
BENCHMARK(BM_FarField)->Arg(64)->Arg(256);

void BM_MieSolve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mie_solve(0.35, 9.0, Complex(0.0, 1.0), Complex(1.0, 0.0), true));
  }
}
BENCHMARK(BM_MieSolve);

void BM_GradientSmooth(benchmark::State& state) {
  const BoundaryCurve curve = make_ellipse(0.4, 0.3, static_cast<int>(state.range(0)));
  Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(curve.n(), -1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(h1_smooth(curve, g, 0.5, 1.0));
  }
}
BENCHMARK(BM_GradientSmooth)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();

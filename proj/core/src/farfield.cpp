// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include "gibc/farfield.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "gibc/errors.hpp"
#include "gibc/specfun.hpp"

namespace gibc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
const Complex kI(0.0, 1.0);

// Fourier coefficients of the scattered circle trace, index n + order.
Eigen::VectorXcd trace_modes(const ScatterSystem& system, const FieldSolution& sol) {
  const DtnOperator& dtn = system.dtn();
  const int nc = dtn.n_nodes();
  const int N = dtn.order;
  if (sol.trace_circle.size() != nc || sol.incident_circle.size() != nc)
    throw shape_mismatch("farfield: trace size != circle node count");

  Eigen::VectorXcd us = sol.trace_circle - sol.incident_circle;
  Eigen::VectorXcd modes = Eigen::VectorXcd::Zero(2 * N + 1);
  const double inv = 1.0 / (kTwoPi * dtn.R);
  for (int n = -N; n <= N; ++n) {
    Complex acc(0.0, 0.0);
    for (int p = 0; p < nc; ++p)
      acc += dtn.weights[p] * us[p] * std::exp(Complex(0.0, -n * dtn.angles[p]));
    modes[n + N] = acc * inv;
  }
  return modes;
}

// gamma_n = sqrt(2/(pi k)) e^{-i pi/4} (-i)^n / H1_n(kR); even in n.
std::vector<Complex> farfield_gammas(double k, double R, int N) {
  const auto cyl = specfun::bessel_jy(N, k * R);
  const Complex c0 = std::sqrt(2.0 / (kPi * k)) * std::exp(Complex(0.0, -0.25 * kPi));
  std::vector<Complex> g(N + 1);
  Complex phase(1.0, 0.0);
  for (int n = 0; n <= N; ++n) {
    g[n] = c0 * phase / cyl.h1(n);
    phase *= -kI;
  }
  return g;
}

double weighted_norm_sq(const Eigen::VectorXcd& v, const std::vector<double>& w) {
  double s = 0.0;
  for (int q = 0; q < v.size(); ++q) s += w[q] * std::norm(v[q]);
  return s;
}

// Deterministic standard normal pairs from a raw 64-bit stream.
class GaussianStream {
 public:
  explicit GaussianStream(unsigned long long seed) : rng_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double u1 = to_unit(rng_());
    const double u2 = to_unit(rng_());
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  static double to_unit(std::uint64_t x) {
    // (0, 1]: keeps log() finite.
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_ = false;
};

}  // namespace

DirectionSet DirectionSet::full_circle(int m) {
  if (m < 2) throw std::invalid_argument("full_circle: need at least 2 directions");
  Aperture ap;
  ap.center = 0.0;
  ap.width = kTwoPi;
  ap.full = true;
  ap.angles.resize(m);
  ap.weights.assign(m, kTwoPi / m);
  for (int q = 0; q < m; ++q) ap.angles[q] = kTwoPi * q / m;
  DirectionSet out;
  out.apertures.push_back(std::move(ap));
  return out;
}

DirectionSet DirectionSet::tiled(const std::vector<double>& centers, double width, int m) {
  if (m < 2) throw std::invalid_argument("tiled: need at least 2 directions per aperture");
  if (!(width > 0.0) || width > kTwoPi) throw std::invalid_argument("tiled: bad aperture width");
  DirectionSet out;
  const double h = width / (m - 1);
  for (const double c : centers) {
    Aperture ap;
    ap.center = c;
    ap.width = width;
    ap.full = false;
    ap.angles.resize(m);
    ap.weights.assign(m, h);
    ap.weights.front() = 0.5 * h;
    ap.weights.back() = 0.5 * h;
    for (int q = 0; q < m; ++q) ap.angles[q] = c - 0.5 * width + q * h;
    out.apertures.push_back(std::move(ap));
  }
  return out;
}

std::vector<Complex> farfield_at(const ScatterSystem& system, const FieldSolution& sol,
                                 const std::vector<double>& angles) {
  const int N = system.dtn().order;
  const Eigen::VectorXcd modes = trace_modes(system, sol);
  const auto gammas = farfield_gammas(system.k(), system.dtn().R, N);

  std::vector<Complex> out(angles.size());
  for (std::size_t a = 0; a < angles.size(); ++a) {
    Complex acc(0.0, 0.0);
    for (int n = -N; n <= N; ++n)
      acc += modes[n + N] * gammas[std::abs(n)] * std::exp(Complex(0.0, n * angles[a]));
    out[a] = acc;
  }
  return out;
}

std::vector<Complex> farfield_quadrature(const ScatterSystem& system, const FieldSolution& sol,
                                         const std::vector<double>& angles) {
  const DtnOperator& dtn = system.dtn();
  const int N = dtn.order;
  const int nc = dtn.n_nodes();
  const double k = system.k();
  const double R = dtn.R;

  const Eigen::VectorXcd modes = trace_modes(system, sol);
  const Eigen::VectorXcd us = sol.trace_circle - sol.incident_circle;
  Eigen::VectorXcd dnus = Eigen::VectorXcd::Zero(nc);
  for (int p = 0; p < nc; ++p) {
    Complex acc(0.0, 0.0);
    for (int n = -N; n <= N; ++n)
      acc += modes[n + N] * dtn.symbols[std::abs(n)] * std::exp(Complex(0.0, n * dtn.angles[p]));
    dnus[p] = acc;
  }

  const Complex c0 = std::exp(Complex(0.0, 0.25 * kPi)) / std::sqrt(8.0 * kPi * k);
  std::vector<Complex> out(angles.size());
  for (std::size_t a = 0; a < angles.size(); ++a) {
    Complex acc(0.0, 0.0);
    for (int p = 0; p < nc; ++p) {
      const double cosd = std::cos(dtn.angles[p] - angles[a]);
      const Complex phi = c0 * std::exp(Complex(0.0, -k * R * cosd));
      const Complex dphi = Complex(0.0, -k * cosd) * phi;
      acc += dtn.weights[p] * (us[p] * dphi - dnus[p] * phi);
    }
    out[a] = acc;
  }
  return out;
}

FarFieldData farfield_from_traces(const ScatterSystem& system,
                                  const std::vector<FieldSolution>& sols,
                                  const std::vector<double>& incident_angles,
                                  const DirectionSet& dirs) {
  if (sols.size() != dirs.apertures.size() || sols.size() != incident_angles.size())
    throw shape_mismatch("farfield_from_traces: waves, apertures and angles must match");
  FarFieldData data;
  data.k = system.k();
  data.incident_angles = incident_angles;
  data.dirs = dirs;
  data.provenance = FarFieldData::Provenance::Computed;
  data.samples.reserve(sols.size());
  for (std::size_t j = 0; j < sols.size(); ++j) {
    const auto vals = farfield_at(system, sols[j], dirs.apertures[j].angles);
    data.samples.emplace_back(Eigen::Map<const Eigen::VectorXcd>(vals.data(), vals.size()));
  }
  return data;
}

Complex farfield_kernel(double k, const Vec2& y, double obs_angle) {
  const Vec2 xhat(std::cos(obs_angle), std::sin(obs_angle));
  const Complex c0 = std::exp(Complex(0.0, 0.25 * kPi)) / std::sqrt(8.0 * kPi * k);
  return c0 * std::exp(Complex(0.0, -k * y.dot(xhat)));
}

IncidentSamples herglotz_samples(double k, const Aperture& aperture,
                                 const Eigen::VectorXcd& residual,
                                 const std::vector<Vec2>& points) {
  if (residual.size() != aperture.m())
    throw shape_mismatch("herglotz_samples: residual size != aperture size");
  IncidentSamples out;
  out.values = Eigen::VectorXcd::Zero(points.size());
  out.radial_derivs = Eigen::VectorXcd::Zero(points.size());
  const Complex c0 = std::exp(Complex(0.0, 0.25 * kPi)) / std::sqrt(8.0 * kPi * k);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec2& y = points[p];
    const Vec2 yhat = y.normalized();
    Complex val(0.0, 0.0), der(0.0, 0.0);
    for (int q = 0; q < aperture.m(); ++q) {
      const Vec2 xhat(std::cos(aperture.angles[q]), std::sin(aperture.angles[q]));
      const Complex phi = c0 * std::exp(Complex(0.0, -k * y.dot(xhat)));
      const Complex w = aperture.weights[q] * std::conj(residual[q]);
      val += w * phi;
      der += w * Complex(0.0, -k * xhat.dot(yhat)) * phi;
    }
    out.values[p] = val;
    out.radial_derivs[p] = der;
  }
  return out;
}

MisfitResult misfit(const FarFieldData& computed, const FarFieldData& observed) {
  if (computed.samples.size() != observed.samples.size())
    throw shape_mismatch("misfit: wave count differs");
  if (computed.k != observed.k) throw shape_mismatch("misfit: wavenumber differs");

  MisfitResult out;
  out.residuals.reserve(computed.samples.size());
  for (std::size_t j = 0; j < computed.samples.size(); ++j) {
    if (computed.samples[j].size() != observed.samples[j].size())
      throw shape_mismatch("misfit: sample count differs in wave " + std::to_string(j));
    const auto& w = observed.dirs.apertures[j].weights;
    Eigen::VectorXcd r = computed.samples[j] - observed.samples[j];
    out.F += 0.5 * weighted_norm_sq(r, w);
    out.norm_obs_sq += weighted_norm_sq(observed.samples[j], w);
    out.residuals.push_back(std::move(r));
  }
  if (out.norm_obs_sq > 0.0) out.error = std::sqrt(2.0 * out.F / out.norm_obs_sq);
  return out;
}

FarFieldData apply_noise(const FarFieldData& data, double sigma, unsigned long long seed) {
  if (sigma < 0.0) throw std::invalid_argument("apply_noise: sigma must be non-negative");
  FarFieldData out = data;
  if (sigma == 0.0) return out;

  GaussianStream gauss(seed);
  for (std::size_t j = 0; j < out.samples.size(); ++j) {
    const auto& w = out.dirs.apertures[j].weights;
    Eigen::VectorXcd g(out.samples[j].size());
    for (int q = 0; q < g.size(); ++q) {
      const double re = gauss.next();
      const double im = gauss.next();
      g[q] = Complex(re, im);
    }
    const double norm_u = std::sqrt(weighted_norm_sq(out.samples[j], w));
    const double norm_g = std::sqrt(weighted_norm_sq(g, w));
    out.samples[j] += (sigma * norm_u / norm_g) * g;
  }
  out.provenance = FarFieldData::Provenance::SyntheticNoisy;
  return out;
}

void write_farfield(const FarFieldData& data, std::ostream& os) {
  char buf[256];
  const double width = data.dirs.apertures.empty() ? 0.0 : data.dirs.apertures.front().width;
  std::snprintf(buf, sizeof(buf), "# k=%.17g N=%zu aperture=%.17g\n", data.k,
                data.samples.size(), width);
  os << buf;
  os << "# incident";
  for (const double a : data.incident_angles) {
    std::snprintf(buf, sizeof(buf), " %.17g", a);
    os << buf;
  }
  os << "\n";
  for (std::size_t j = 0; j < data.samples.size(); ++j) {
    const Aperture& ap = data.dirs.apertures[j];
    for (int q = 0; q < data.samples[j].size(); ++q) {
      std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g\n", j, ap.angles[q],
                    data.samples[j][q].real(), data.samples[j][q].imag());
      os << buf;
    }
  }
}

FarFieldData read_farfield(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw io_error("far-field file: missing header");
  FarFieldData data;
  std::size_t n_waves = 0;
  double width = 0.0;
  if (std::sscanf(line.c_str(), "# k=%lg N=%zu aperture=%lg", &data.k, &n_waves, &width) != 3)
    throw io_error("far-field file: malformed header: " + line);

  std::vector<std::vector<double>> angles(n_waves);
  std::vector<std::vector<Complex>> samples(n_waves);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# incident", 0) == 0) {
      std::istringstream ss(line.substr(10));
      double a;
      while (ss >> a) data.incident_angles.push_back(a);
      continue;
    }
    if (line[0] == '#') continue;
    std::size_t j;
    double theta, re, im;
    if (std::sscanf(line.c_str(), "%zu %lg %lg %lg", &j, &theta, &re, &im) != 4)
      throw io_error("far-field file: malformed row: " + line);
    if (j >= n_waves) throw io_error("far-field file: wave index out of range");
    angles[j].push_back(theta);
    samples[j].push_back(Complex(re, im));
  }
  if (data.incident_angles.empty()) {
    for (std::size_t j = 0; j < n_waves; ++j)
      data.incident_angles.push_back(kTwoPi * j / std::max<std::size_t>(n_waves, 1));
  }
  if (data.incident_angles.size() != n_waves)
    throw io_error("far-field file: incident angle count mismatch");

  const bool full = std::abs(width - kTwoPi) < 1e-9;
  for (std::size_t j = 0; j < n_waves; ++j) {
    const int m = static_cast<int>(angles[j].size());
    if (m < 2) throw io_error("far-field file: too few samples in wave " + std::to_string(j));
    Aperture ap;
    ap.width = width;
    ap.full = full;
    ap.angles = angles[j];
    ap.center = full ? 0.0 : 0.5 * (angles[j].front() + angles[j].back());
    if (full) {
      ap.weights.assign(m, kTwoPi / m);
    } else {
      const double h = width / (m - 1);
      ap.weights.assign(m, h);
      ap.weights.front() = 0.5 * h;
      ap.weights.back() = 0.5 * h;
    }
    data.dirs.apertures.push_back(std::move(ap));
    data.samples.emplace_back(
        Eigen::Map<const Eigen::VectorXcd>(samples[j].data(), samples[j].size()));
  }
  data.provenance = FarFieldData::Provenance::Computed;
  return data;
}

}  // namespace gibc

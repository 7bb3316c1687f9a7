// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include "gibc/assembly.hpp"

#include <cmath>

#include "gibc/errors.hpp"

namespace gibc {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

void ImpedanceField::validate() const {
  if (lambda.size() != mu.size()) throw shape_mismatch("impedance: lambda/mu length mismatch");
  for (int i = 0; i < n(); ++i) {
    if (lambda[i].imag() < 0.0)
      throw constraint_violation("Im lambda < 0 at node " + std::to_string(i));
    if (mu[i].imag() > 0.0) throw constraint_violation("Im mu > 0 at node " + std::to_string(i));
    if (mu[i].real() < c_min)
      throw constraint_violation("Re mu < c_min at node " + std::to_string(i));
  }
}

ImpedanceField constant_impedance(int n, Complex lambda, Complex mu, double c_min) {
  ImpedanceField imp;
  imp.lambda.assign(n, lambda);
  imp.mu.assign(n, mu);
  imp.c_min = c_min;
  return imp;
}

IncidentSamples plane_wave_samples(double k, double incident_angle,
                                   const std::vector<Vec2>& points) {
  const Vec2 d(std::cos(incident_angle), std::sin(incident_angle));
  IncidentSamples out;
  out.values.resize(points.size());
  out.radial_derivs.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Complex val = std::exp(Complex(0.0, k * d.dot(points[p])));
    out.values[p] = val;
    out.radial_derivs[p] = Complex(0.0, k * d.dot(points[p].normalized())) * val;
  }
  return out;
}

void assemble_stiffness_mass(const AnnulusMesh& mesh, SpMat* stiffness, SpMat* mass) {
  const int n = mesh.n_vertices();
  std::vector<Eigen::Triplet<Complex>> kt, mt;
  kt.reserve(9 * mesh.triangles.size());
  mt.reserve(9 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    const Vec2& p0 = mesh.vertices[tri[0]];
    const Vec2& p1 = mesh.vertices[tri[1]];
    const Vec2& p2 = mesh.vertices[tri[2]];
    // Opposite-edge vectors; grad phi_i = rot90(e_i) / (2 area), so
    // K_ij = (e_i . e_j) / (4 area) exactly.
    const Vec2 e0 = p2 - p1;
    const Vec2 e1 = p0 - p2;
    const Vec2 e2 = p1 - p0;
    const double twice_area = e2.x() * (-e1.y()) - e2.y() * (-e1.x());
    const double area = 0.5 * twice_area;
    const Vec2 e[3] = {e0, e1, e2};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tri[i], tri[j], Complex(e[i].dot(e[j]) / (4.0 * area), 0.0));
        mt.emplace_back(tri[i], tri[j], Complex(area / 12.0 * (i == j ? 2.0 : 1.0), 0.0));
      }
    }
  }
  stiffness->resize(n, n);
  stiffness->setFromTriplets(kt.begin(), kt.end());
  mass->resize(n, n);
  mass->setFromTriplets(mt.begin(), mt.end());
}

SpMat assemble_interior(const AnnulusMesh& mesh, double k) {
  SpMat stiffness, mass;
  assemble_stiffness_mass(mesh, &stiffness, &mass);
  return stiffness - Complex(k * k, 0.0) * mass;
}

SpMat assemble_gibc(const BoundaryCurve& curve, const ImpedanceField& imp, double k,
                    bool rescaled, int n_total, bool enforce_h) {
  const int nb = curve.n();
  if (imp.n() != nb) throw shape_mismatch("assemble_gibc: impedance size != curve size");
  if (enforce_h) imp.validate();

  const Complex lam_scale = rescaled ? Complex(k, 0.0) : Complex(1.0, 0.0);
  const Complex mu_scale = rescaled ? Complex(1.0 / k, 0.0) : Complex(1.0, 0.0);

  std::vector<Eigen::Triplet<Complex>> tr;
  tr.reserve(5 * nb);
  for (int i = 0; i < nb; ++i) {
    const int ip = (i + 1) % nb;
    const Complex mu_e = mu_scale * 0.5 * (imp.mu[i] + imp.mu[ip]);
    const Complex c = mu_e / curve.edge_length(i);
    tr.emplace_back(i, i, c);
    tr.emplace_back(ip, ip, c);
    tr.emplace_back(i, ip, -c);
    tr.emplace_back(ip, i, -c);
    tr.emplace_back(i, i, -lam_scale * imp.lambda[i] * curve.weight(i));
  }
  SpMat out(n_total, n_total);
  out.setFromTriplets(tr.begin(), tr.end());
  return out;
}

ScatterSystem::ScatterSystem(std::shared_ptr<const AnnulusMesh> mesh, BoundaryCurve curve,
                             ImpedanceField imp, double k, bool rescaled, int dtn_order)
    : mesh_(std::move(mesh)), curve_(std::move(curve)), imp_(std::move(imp)), k_(k),
      rescaled_(rescaled) {
  if (!(k_ > 0.0)) throw std::domain_error("ScatterSystem: k must be positive");
  const int nb = mesh_->n_b;
  if (curve_.n() != nb) throw shape_mismatch("ScatterSystem: curve does not match mesh");

  std::vector<double> weights(nb, kTwoPi * mesh_->R / nb);
  dtn_ = make_dtn_operator(k_, mesh_->R, dtn_order, mesh_->circle_angles, std::move(weights));
  dtn_block_ = build_dtn_block(dtn_);

  A_ = assemble_interior(*mesh_, k_);
  A_ += assemble_gibc(curve_, imp_, k_, rescaled_, mesh_->n_vertices());

  std::vector<Eigen::Triplet<Complex>> tr;
  tr.reserve(static_cast<std::size_t>(nb) * nb);
  for (int p = 0; p < nb; ++p)
    for (int q = 0; q < nb; ++q)
      tr.emplace_back(mesh_->circle_vertex(p), mesh_->circle_vertex(q), -dtn_block_(p, q));
  SpMat dtn_sp(mesh_->n_vertices(), mesh_->n_vertices());
  dtn_sp.setFromTriplets(tr.begin(), tr.end());
  A_ += dtn_sp;
  A_.makeCompressed();

  lu_.compute(A_);
  if (lu_.info() != Eigen::Success)
    throw singular_matrix_error("forward operator factorization failed");
}

Eigen::VectorXcd ScatterSystem::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != A_.rows()) throw shape_mismatch("solve: rhs size mismatch");
  return lu_.solve(rhs);
}

std::unique_ptr<ScatterSystem> make_scatter_system(std::shared_ptr<const AnnulusMesh> mesh,
                                                   const BoundaryCurve& curve,
                                                   const ImpedanceField& imp, double k,
                                                   bool rescaled, int dtn_order) {
  if (dtn_order < 0) dtn_order = default_dtn_order(k, mesh->R);
  return std::make_unique<ScatterSystem>(std::move(mesh), curve, imp, k, rescaled, dtn_order);
}

Eigen::VectorXcd assemble_rhs(const ScatterSystem& system, const IncidentSamples& incident) {
  const AnnulusMesh& mesh = system.mesh();
  const int nb = mesh.n_b;
  if (incident.values.size() != nb || incident.radial_derivs.size() != nb)
    throw shape_mismatch("assemble_rhs: incident sample size != circle node count");

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(mesh.n_vertices());
  const Eigen::VectorXcd dtn_ui = system.dtn_block() * incident.values;
  for (int p = 0; p < nb; ++p) {
    rhs[mesh.circle_vertex(p)] =
        system.dtn().weights[p] * incident.radial_derivs[p] - dtn_ui[p];
  }
  return rhs;
}

Eigen::VectorXcd assemble_rhs(const ScatterSystem& system, double incident_angle) {
  const AnnulusMesh& mesh = system.mesh();
  std::vector<Vec2> pts(mesh.n_b);
  for (int p = 0; p < mesh.n_b; ++p) pts[p] = mesh.vertices[mesh.circle_vertex(p)];
  return assemble_rhs(system, plane_wave_samples(system.k(), incident_angle, pts));
}

FieldSolution solve_forward(const ScatterSystem& system, const Eigen::VectorXcd& rhs,
                            const IncidentSamples* incident, double incident_angle) {
  FieldSolution sol;
  sol.u = system.solve(rhs);
  const double rhs_norm = rhs.norm();
  if (rhs_norm > 0.0) {
    const double res = (system.matrix() * sol.u - rhs).norm() / rhs_norm;
    sol.residual_rel = res;
    if (!(res <= 1e-10))
      throw singular_matrix_error("forward solve residual " + std::to_string(res));
  }

  const AnnulusMesh& mesh = system.mesh();
  const int nb = mesh.n_b;
  sol.trace_obstacle.resize(nb);
  sol.trace_circle.resize(nb);
  for (int i = 0; i < nb; ++i) {
    sol.trace_obstacle[i] = sol.u[mesh.obstacle_vertex(i)];
    sol.trace_circle[i] = sol.u[mesh.circle_vertex(i)];
  }
  if (incident != nullptr) {
    sol.incident_circle = incident->values;
  } else {
    sol.incident_circle = Eigen::VectorXcd::Zero(nb);
  }
  sol.incident_angle = incident_angle;
  return sol;
}

FieldSolution solve_plane_wave(const ScatterSystem& system, double incident_angle) {
  const AnnulusMesh& mesh = system.mesh();
  std::vector<Vec2> pts(mesh.n_b);
  for (int p = 0; p < mesh.n_b; ++p) pts[p] = mesh.vertices[mesh.circle_vertex(p)];
  const IncidentSamples inc = plane_wave_samples(system.k(), incident_angle, pts);
  return solve_forward(system, assemble_rhs(system, inc), &inc, incident_angle);
}

}  // namespace gibc

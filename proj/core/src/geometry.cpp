// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include "gibc/geometry.hpp"

#include <cmath>
#include <ostream>

#include "gibc/errors.hpp"

namespace gibc {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
         o4 != 0;
}

void validate_simple_star_shaped(const std::vector<Vec2>& nodes) {
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = nodes[i];
    const Vec2& q = nodes[(i + 1) % n];
    if (p.x() * q.y() - p.y() * q.x() <= 0.0)
      throw geometry_error("node polygon is not star-shaped with respect to the origin");
  }
  // Non-adjacent segment pairs must not cross.
  for (int i = 0; i < n; ++i) {
    const Vec2& a = nodes[i];
    const Vec2& b = nodes[(i + 1) % n];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // wrap-around neighbours
      if (segments_intersect(a, b, nodes[j], nodes[(j + 1) % n]))
        throw geometry_error("boundary polygon self-intersects");
    }
  }
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::vector<Vec2> nodes, std::vector<Vec2> velocities)
    : nodes_(std::move(nodes)), velocities_(std::move(velocities)) {
  if (nodes_.size() < 16) throw geometry_error("boundary curve needs at least 16 nodes");
  if (nodes_.size() != velocities_.size())
    throw geometry_error("node and velocity counts differ");
  validate_simple_star_shaped(nodes_);

  const double dt = kTwoPi / static_cast<double>(nodes_.size());
  weights_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double speed = velocities_[i].norm();
    if (!(speed > 0.0)) throw geometry_error("vanishing parametric velocity");
    weights_[i] = speed * dt;
    perimeter_ += weights_[i];
    max_radius_ = std::max(max_radius_, nodes_[i].norm());
  }
}

double BoundaryCurve::param(int i) const { return kTwoPi * i / static_cast<double>(n()); }

double BoundaryCurve::polar_angle(int i) const {
  double th = std::atan2(nodes_[i].y(), nodes_[i].x());
  if (th < 0.0) th += kTwoPi;
  return th;
}

double BoundaryCurve::edge_length(int i) const {
  return 0.5 * (weights_[i] + weights_[(i + 1) % n()]);
}

double PerturbationField::w1inf_norm(std::span<const Vec2> points) const {
  double v_max = 0.0;
  double g_max = 0.0;
  for (const Vec2& p : points) {
    v_max = std::max(v_max, value(p).norm());
    const Mat2 j = jacobian(p);
    // Spectral norm of a 2x2 matrix via its singular values.
    const double a = j.squaredNorm();
    const double det = j.determinant();
    const double disc = std::sqrt(std::max(0.0, a * a - 4.0 * det * det));
    g_max = std::max(g_max, std::sqrt(0.5 * (a + disc)));
  }
  return v_max + g_max;
}

PerturbationField PerturbationField::negated() const {
  PerturbationField out;
  out.amplitude = amplitude;
  out.modes = modes;
  out.value = [f = value](const Vec2& p) -> Vec2 { return -f(p); };
  out.jacobian = [f = jacobian](const Vec2& p) -> Mat2 { return -f(p); };
  return out;
}

BoundaryCurve make_ellipse(double a, double b, int n_b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("make_ellipse: semi-axes must be positive");
  if (n_b < 16) throw std::invalid_argument("make_ellipse: n_b must be at least 16");
  std::vector<Vec2> nodes(n_b), vel(n_b);
  for (int i = 0; i < n_b; ++i) {
    const double t = kTwoPi * i / n_b;
    nodes[i] = Vec2(a * std::cos(t), b * std::sin(t));
    vel[i] = Vec2(-a * std::sin(t), b * std::cos(t));
  }
  return BoundaryCurve(std::move(nodes), std::move(vel));
}

BoundaryCurve make_perturbed_ellipse(double a, double b, double gamma, int m, int n_b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("make_perturbed_ellipse: semi-axes must be positive");
  if (n_b < 16) throw std::invalid_argument("make_perturbed_ellipse: n_b must be at least 16");
  if (m < 1) throw std::invalid_argument("make_perturbed_ellipse: mode count must be positive");
  if (!(std::abs(gamma) < 1.0))
    throw std::invalid_argument("make_perturbed_ellipse: |gamma| must be below 1");
  std::vector<Vec2> nodes(n_b), vel(n_b);
  for (int i = 0; i < n_b; ++i) {
    const double t = kTwoPi * i / n_b;
    nodes[i] = Vec2(a * (std::cos(t) + gamma * std::cos(m * t)),
                    b * (std::sin(t) + gamma * std::sin(m * t)));
    vel[i] = Vec2(-a * (std::sin(t) + gamma * m * std::sin(m * t)),
                  b * (std::cos(t) + gamma * m * std::cos(m * t)));
  }
  try {
    return BoundaryCurve(std::move(nodes), std::move(vel));
  } catch (const geometry_error& e) {
    throw std::invalid_argument(std::string("make_perturbed_ellipse: gamma too large: ") + e.what());
  }
}

PerturbationField make_oscillation_field(double a, double b, double gamma, int m) {
  PerturbationField f;
  f.amplitude = gamma;
  f.modes = m;
  f.value = [=](const Vec2& p) -> Vec2 {
    const double t = std::atan2(p.y() / b, p.x() / a);
    return Vec2(a * gamma * std::cos(m * t), b * gamma * std::sin(m * t));
  };
  f.jacobian = [=](const Vec2& p) -> Mat2 {
    const double u = p.x() / a;
    const double v = p.y() / b;
    const double r2 = u * u + v * v;
    const double t = std::atan2(v, u);
    // d eps / dt outer grad t, with grad t = (-v / (a r2), u / (b r2)).
    const double dt_dx = -v / (a * r2);
    const double dt_dy = u / (b * r2);
    const double e1t = -a * gamma * m * std::sin(m * t);
    const double e2t = b * gamma * m * std::cos(m * t);
    Mat2 jac;
    jac << e1t * dt_dx, e1t * dt_dy, e2t * dt_dx, e2t * dt_dy;
    return jac;
  };
  return f;
}

PerturbationField make_translation_field(const Vec2& shift) {
  PerturbationField f;
  f.amplitude = shift.norm();
  f.modes = 0;
  f.value = [shift](const Vec2&) -> Vec2 { return shift; };
  f.jacobian = [](const Vec2&) -> Mat2 { return Mat2::Zero(); };
  return f;
}

BoundaryCurve apply_deformation(const BoundaryCurve& curve, const PerturbationField& field) {
  const double norm = field.w1inf_norm(curve.nodes());
  if (norm >= 1.0)
    throw deformation_error("sampled W^{1,inf} norm " + std::to_string(norm) + " >= 1");

  const int n = curve.n();
  std::vector<Vec2> nodes(n), vel(n);
  for (int i = 0; i < n; ++i) {
    const Vec2& p = curve.node(i);
    nodes[i] = p + field.value(p);
    vel[i] = (Mat2::Identity() + field.jacobian(p)) * curve.velocity(i);
  }
  return BoundaryCurve(std::move(nodes), std::move(vel));
}

AnnulusMesh build_annulus_mesh(const BoundaryCurve& curve, double R, int n_r, double grading) {
  if (n_r < 4) throw std::invalid_argument("build_annulus_mesh: n_r must be at least 4");
  if (!(grading >= 1.0)) throw std::invalid_argument("build_annulus_mesh: grading must be >= 1");
  if (!(curve.max_radius() < R))
    throw geometry_error("obstacle is not strictly inside the truncation circle");

  const int n_b = curve.n();
  AnnulusMesh mesh;
  mesh.n_b = n_b;
  mesh.n_r = n_r;
  mesh.R = R;
  mesh.grading = grading;

  // Radial blending fractions with geometrically graded layer thicknesses,
  // thinnest layer against the obstacle.
  std::vector<double> s(n_r + 1);
  if (grading == 1.0) {
    for (int j = 0; j <= n_r; ++j) s[j] = static_cast<double>(j) / n_r;
  } else {
    const double denom = std::pow(grading, n_r) - 1.0;
    for (int j = 0; j <= n_r; ++j) s[j] = (std::pow(grading, j) - 1.0) / denom;
  }
  s[0] = 0.0;
  s[n_r] = 1.0;

  mesh.vertices.resize(static_cast<std::size_t>(n_b) * (n_r + 1));
  mesh.markers.assign(mesh.vertices.size(), AnnulusMesh::Marker::Interior);
  mesh.circle_angles.resize(n_b);
  for (int j = 0; j <= n_r; ++j) {
    for (int i = 0; i < n_b; ++i) {
      const double t = curve.param(i);
      const Vec2 outer(R * std::cos(t), R * std::sin(t));
      mesh.vertices[static_cast<std::size_t>(j) * n_b + i] =
          (1.0 - s[j]) * curve.node(i) + s[j] * outer;
    }
  }
  for (int i = 0; i < n_b; ++i) {
    mesh.markers[mesh.obstacle_vertex(i)] = AnnulusMesh::Marker::Obstacle;
    mesh.markers[mesh.circle_vertex(i)] = AnnulusMesh::Marker::Circle;
    mesh.circle_angles[i] = curve.param(i);
  }

  mesh.triangles.reserve(static_cast<std::size_t>(2) * n_b * n_r);
  for (int j = 0; j < n_r; ++j) {
    for (int i = 0; i < n_b; ++i) {
      const int ip = (i + 1) % n_b;
      const int a = j * n_b + i;
      const int b = j * n_b + ip;
      const int c = (j + 1) * n_b + ip;
      const int d = (j + 1) * n_b + i;
      const double d1 = (mesh.vertices[a] - mesh.vertices[c]).norm();
      const double d2 = (mesh.vertices[b] - mesh.vertices[d]).norm();
      // Shorter diagonal wins; near-ties go to the diagonal at the lower
      // vertex index so symmetric geometries mesh symmetrically.
      const bool use_ac = d1 <= d2 * (1.0 + 1e-12);
      // Counterclockwise winding: outward in j, then backward in i.
      if (use_ac) {
        mesh.triangles.push_back({a, c, b});
        mesh.triangles.push_back({a, d, c});
      } else {
        mesh.triangles.push_back({a, d, b});
        mesh.triangles.push_back({b, d, c});
      }
    }
  }

  for (const auto& tri : mesh.triangles) {
    const Vec2& p0 = mesh.vertices[tri[0]];
    const Vec2& p1 = mesh.vertices[tri[1]];
    const Vec2& p2 = mesh.vertices[tri[2]];
    const double twice_area =
        (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
    if (!(twice_area > 0.0)) throw geometry_error("radial blending produced a degenerate triangle");
  }
  return mesh;
}

void write_mesh(const AnnulusMesh& mesh, std::ostream& os) {
  char buf[160];
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %d\n", mesh.vertices[v].x(),
                  mesh.vertices[v].y(), static_cast<int>(mesh.markers[v]));
    os << buf;
  }
  for (const auto& tri : mesh.triangles) {
    std::snprintf(buf, sizeof(buf), "t %d %d %d\n", tri[0], tri[1], tri[2]);
    os << buf;
  }
}

}  // namespace gibc

// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_GEOMETRY_HPP
#define GIBC_GEOMETRY_HPP

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace gibc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Closed star-shaped boundary curve sampled at n uniform parameter values
// t_i = 2 pi i / n.  Velocities are the exact parametric derivatives at the
// nodes; arclength node weights w_i = |gamma'(t_i)| dt come from the periodic
// trapezoid rule, so sum(w) reproduces the smooth perimeter.
class BoundaryCurve {
 public:
  BoundaryCurve(std::vector<Vec2> nodes, std::vector<Vec2> velocities);

  int n() const { return static_cast<int>(nodes_.size()); }
  const Vec2& node(int i) const { return nodes_[i]; }
  const Vec2& velocity(int i) const { return velocities_[i]; }
  Vec2 tangent(int i) const { return velocities_[i].normalized(); }
  double param(int i) const;
  // Polar angle of node i in [0, 2 pi); impedance profiles are functions of it.
  double polar_angle(int i) const;

  double weight(int i) const { return weights_[i]; }
  // P1 edge between nodes i and i+1 (mod n).
  double edge_length(int i) const;
  double perimeter() const { return perimeter_; }
  double max_radius() const { return max_radius_; }

  const std::vector<Vec2>& nodes() const { return nodes_; }

 private:
  std::vector<Vec2> nodes_;
  std::vector<Vec2> velocities_;
  std::vector<double> weights_;
  double perimeter_ = 0.0;
  double max_radius_ = 0.0;
};

// Displacement field eps used to build the perturbed scatterer f_eps = Id + eps.
// Both the values and the Jacobian are needed: the mapped curve keeps analytic
// velocities through the chain rule (I + grad eps) gamma'.
struct PerturbationField {
  double amplitude = 0.0;
  int modes = 0;
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> jacobian;

  // W^{1,inf} estimate max|eps| + max|grad eps|_2 over the sample points.
  double w1inf_norm(std::span<const Vec2> points) const;

  PerturbationField negated() const;
};

BoundaryCurve make_ellipse(double a, double b, int n_b);

// x(t) = a (cos t + gamma cos(m t)), y(t) = b (sin t + gamma sin(m t)).
BoundaryCurve make_perturbed_ellipse(double a, double b, double gamma, int m, int n_b);

// Oscillatory displacement field that reproduces make_perturbed_ellipse when
// applied to the matching plain ellipse.
PerturbationField make_oscillation_field(double a, double b, double gamma, int m);
PerturbationField make_translation_field(const Vec2& shift);

// Maps the curve through f_eps = Id + eps.  Throws deformation_error if the
// sampled W^{1,inf} norm reaches 1, geometry_error if the image stops being
// star-shaped or self-intersects.
BoundaryCurve apply_deformation(const BoundaryCurve& curve, const PerturbationField& field);

// Structured annulus mesh between the obstacle boundary and the circle of
// radius R.  Vertex (i, j) = j*n_b + i blends curve node i toward
// R (cos t_i, sin t_i) with a radial grading that clusters layers near the
// obstacle; quads are split along their shorter diagonal.
struct AnnulusMesh {
  enum class Marker : unsigned char { Interior, Obstacle, Circle };

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Marker> markers;
  int n_b = 0;
  int n_r = 0;
  double R = 0.0;
  double grading = 1.0;
  std::vector<double> circle_angles;  // t_i for the outer ring, in ring order

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int obstacle_vertex(int i) const { return i; }
  int circle_vertex(int i) const { return n_r * n_b + i; }
};

AnnulusMesh build_annulus_mesh(const BoundaryCurve& curve, double R, int n_r,
                               double grading = 1.15);

// Plain text export: "v x y marker" then "t i j k", doubles at full precision.
void write_mesh(const AnnulusMesh& mesh, std::ostream& os);

}  // namespace gibc

#endif  // GIBC_GEOMETRY_HPP

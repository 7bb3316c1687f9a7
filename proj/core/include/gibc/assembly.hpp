// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_ASSEMBLY_HPP
#define GIBC_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <complex>
#include <limits>
#include <memory>
#include <vector>

#include "gibc/dtn.hpp"
#include "gibc/geometry.hpp"

namespace gibc {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;

// Nodal impedance pair (lambda, mu) on the obstacle boundary, one value per
// curve node.  Assumption H: Im lambda >= 0, Im mu <= 0, Re mu >= c_min.
// The known parts Re lambda and Im mu stay pinned at zero by the inversion.
struct ImpedanceField {
  std::vector<Complex> lambda;
  std::vector<Complex> mu;
  double c_min = 0.01;

  int n() const { return static_cast<int>(lambda.size()); }
  // Throws constraint_violation when assumption H fails.
  void validate() const;
};

ImpedanceField constant_impedance(int n, Complex lambda, Complex mu, double c_min = 0.01);

// Incident field sampled on the outer circle nodes: values and radial
// derivatives, enough to drive the truncated weak form.
struct IncidentSamples {
  Eigen::VectorXcd values;
  Eigen::VectorXcd radial_derivs;
};

IncidentSamples plane_wave_samples(double k, double incident_angle,
                                   const std::vector<Vec2>& points);

// Interior P1 blocks: exact stiffness and consistent mass.
void assemble_stiffness_mass(const AnnulusMesh& mesh, SpMat* stiffness, SpMat* mass);
SpMat assemble_interior(const AnnulusMesh& mesh, double k);

// Boundary contribution of the impedance condition, added to the interior
// block: +sum_e mu_eff (u_i - u_j)(v_i - v_j)/h_e - sum_i lambda_eff w_i u_i v_i
// on obstacle nodes.  In rescaled mode lambda_eff = k lambda, mu_eff = mu / k.
// enforce_h = false skips the assumption-H validation (test hook).
SpMat assemble_gibc(const BoundaryCurve& curve, const ImpedanceField& imp, double k,
                    bool rescaled, int n_total, bool enforce_h = true);

// Forward scattering system on the annulus: interior Helmholtz + impedance
// block - DtN block, complex symmetric, factorized once, many right-hand sides.
class ScatterSystem {
 public:
  ScatterSystem(std::shared_ptr<const AnnulusMesh> mesh, BoundaryCurve curve,
                ImpedanceField imp, double k, bool rescaled, int dtn_order);

  const AnnulusMesh& mesh() const { return *mesh_; }
  const BoundaryCurve& curve() const { return curve_; }
  const ImpedanceField& impedance() const { return imp_; }
  const DtnOperator& dtn() const { return dtn_; }
  const Eigen::MatrixXcd& dtn_block() const { return dtn_block_; }
  const SpMat& matrix() const { return A_; }
  double k() const { return k_; }
  bool rescaled() const { return rescaled_; }
  int n_dofs() const { return static_cast<int>(A_.rows()); }

  // Solves A u = rhs against the cached factorization; safe to call
  // concurrently from several threads.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

 private:
  std::shared_ptr<const AnnulusMesh> mesh_;
  BoundaryCurve curve_;
  ImpedanceField imp_;
  DtnOperator dtn_;
  Eigen::MatrixXcd dtn_block_;
  SpMat A_;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  double k_;
  bool rescaled_;
};

std::unique_ptr<ScatterSystem> make_scatter_system(std::shared_ptr<const AnnulusMesh> mesh,
                                                   const BoundaryCurve& curve,
                                                   const ImpedanceField& imp, double k,
                                                   bool rescaled = false, int dtn_order = -1);

// Weak-form right-hand side l(v) = int_{|x|=R} (d_r u^i - S_R u^i) conj(v) ds
// for the given incident samples; supported on circle DOFs only.
Eigen::VectorXcd assemble_rhs(const ScatterSystem& system, const IncidentSamples& incident);
Eigen::VectorXcd assemble_rhs(const ScatterSystem& system, double incident_angle);

// Total-field solve for one right-hand side.  The incident samples (when
// given) are stored with the solution so the scattered trace u - u^i is
// available to the far-field extraction.
struct FieldSolution {
  Eigen::VectorXcd u;
  Eigen::VectorXcd trace_obstacle;
  Eigen::VectorXcd trace_circle;
  Eigen::VectorXcd incident_circle;
  double incident_angle = std::numeric_limits<double>::quiet_NaN();
  double residual_rel = 0.0;
};

FieldSolution solve_forward(const ScatterSystem& system, const Eigen::VectorXcd& rhs,
                            const IncidentSamples* incident = nullptr,
                            double incident_angle = std::numeric_limits<double>::quiet_NaN());

// Convenience: plane-wave right-hand side and solve in one call.
FieldSolution solve_plane_wave(const ScatterSystem& system, double incident_angle);

}  // namespace gibc

#endif  // GIBC_ASSEMBLY_HPP

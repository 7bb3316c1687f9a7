// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_INVERSE_HPP
#define GIBC_INVERSE_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "gibc/assembly.hpp"
#include "gibc/farfield.hpp"
#include "gibc/geometry.hpp"

namespace gibc {

// Steepest descent on F(lambda, mu) = 1/2 sum_j ||u_inf,j - obs_j||^2 with an
// H^1 gradient smoothing on each coefficient family.  Unknowns alternate:
// Im lambda on even iterations (0-based), Re mu on odd; known parts stay
// pinned (Re lambda = 0, Im mu = 0).
struct InversionConfig {
  double eta1 = 1.0;   // smoothing weight, lambda family
  double eta2 = 1.0;   // smoothing weight, mu family
  double eta_decay = 0.8;
  int eta_every = 10;  // decay both eta after this many iterations
  double eta_floor = 1e-3;
  double alpha1 = 1.0;  // initial step, lambda family
  double alpha2 = 1.0;  // initial step, mu family
  double alpha_min = 1e-6;
  double alpha_growth = 1.2;  // applied after an accepted step, capped at the initial value
  int max_iterations = 100;
  double f_stop_rel = 1e-15;  // stop once F <= f_stop_rel * ||obs||^2
  bool optimize_lambda = true;
  bool optimize_mu = true;
};

struct InversionProblem {
  std::shared_ptr<const AnnulusMesh> mesh;
  std::shared_ptr<const BoundaryCurve> curve;
  double k = 0.0;
  bool rescaled = true;
  int dtn_order = -1;  // negative: default order
  FarFieldData observed;
};

// One forward sweep at a fixed coefficient pair: factorization, per-wave
// fields, far-field samples and residuals.
struct CostEval {
  std::unique_ptr<ScatterSystem> system;
  std::vector<FieldSolution> waves;
  FarFieldData computed;
  MisfitResult misfit;
};

CostEval eval_cost(const InversionProblem& problem, const ImpedanceField& imp);

// Nodal functional gradients, both families, from one adjoint sweep reusing
// the factorization in `eval`.  g_lambda pairs with perturbations of
// Im lambda, g_mu with perturbations of Re mu.
struct GradientPair {
  Eigen::VectorXd g_lambda;
  Eigen::VectorXd g_mu;
};

GradientPair gradient_functionals(const InversionProblem& problem, const CostEval& eval);

// Solves (eta K_b + M_b) delta = alpha g on the closed boundary curve with
// lumped mass; returns the smoothed descent increment.
Eigen::VectorXd h1_smooth(const BoundaryCurve& curve, const Eigen::VectorXd& g, double eta,
                          double alpha);

struct HistoryRow {
  int iter = 0;
  double f = 0.0;
  double error = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
};

struct InversionState {
  ImpedanceField imp;
  CostEval current;
  int iterations = 0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  bool lambda_exhausted = false;
  bool mu_exhausted = false;
  std::vector<HistoryRow> history;
};

// Family selector for a single descent step.
enum class Family { Lambda, Mu };

// Backtracking step on one family; halves alpha until F stops increasing and
// projects onto assumption H (Im lambda >= 0, Re mu >= c_min).  Returns false
// once alpha underflows alpha_min without an accepted trial.
bool descent_step(const InversionProblem& problem, const InversionConfig& config,
                  InversionState& state, Family family);

InversionState reconstruct(const InversionProblem& problem, const InversionConfig& config,
                           const ImpedanceField& initial);

void write_history_csv(const std::vector<HistoryRow>& rows, std::ostream& os);
void write_coefficients_csv(const BoundaryCurve& curve, const ImpedanceField& imp,
                            std::ostream& os);

}  // namespace gibc

#endif  // GIBC_INVERSE_HPP

// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include "gibc/inverse.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "gibc/errors.hpp"

namespace gibc {

CostEval eval_cost(const InversionProblem& problem, const ImpedanceField& imp) {
  if (!problem.mesh || !problem.curve) throw config_error("eval_cost: mesh and curve required");
  CostEval ev;
  ev.system = make_scatter_system(problem.mesh, *problem.curve, imp, problem.k, problem.rescaled,
                                  problem.dtn_order);
  const auto& angles = problem.observed.incident_angles;
  ev.waves.reserve(angles.size());
  for (double angle : angles) ev.waves.push_back(solve_plane_wave(*ev.system, angle));
  ev.computed = farfield_from_traces(*ev.system, ev.waves, angles, problem.observed.dirs);
  ev.misfit = misfit(ev.computed, problem.observed);
  return ev;
}

GradientPair gradient_functionals(const InversionProblem& problem, const CostEval& eval) {
  const BoundaryCurve& curve = *problem.curve;
  const int nb = curve.n();
  GradientPair g;
  g.g_lambda = Eigen::VectorXd::Zero(nb);
  g.g_mu = Eigen::VectorXd::Zero(nb);

  const ScatterSystem& sys = *eval.system;
  const AnnulusMesh& mesh = sys.mesh();
  std::vector<Vec2> circle_pts(mesh.n_b);
  for (int p = 0; p < mesh.n_b; ++p) circle_pts[p] = mesh.vertices[mesh.circle_vertex(p)];

  const double s_lam = problem.rescaled ? problem.k : 1.0;
  const double s_mu = problem.rescaled ? 1.0 / problem.k : 1.0;

  for (std::size_t j = 0; j < eval.waves.size(); ++j) {
    // Adjoint source: Herglotz wave of the conjugated residual.  A = A^T, so
    // the forward factorization serves the adjoint solve as well.
    const IncidentSamples inc = herglotz_samples(
        problem.k, problem.observed.dirs.apertures[j], eval.misfit.residuals[j], circle_pts);
    const Eigen::VectorXcd rhs = assemble_rhs(sys, inc);
    const FieldSolution adj = solve_forward(sys, rhs);
    const Eigen::VectorXcd& z = adj.trace_obstacle;
    const Eigen::VectorXcd& u = eval.waves[j].trace_obstacle;

    for (int i = 0; i < nb; ++i) {
      g.g_lambda[i] -= s_lam * curve.weight(i) * std::imag(z[i] * u[i]);
    }
    for (int e = 0; e < nb; ++e) {
      const int ip = (e + 1) % nb;
      const double d = std::real((z[ip] - z[e]) * (u[ip] - u[e])) / curve.edge_length(e);
      g.g_mu[e] -= s_mu * 0.5 * d;
      g.g_mu[ip] -= s_mu * 0.5 * d;
    }
  }
  return g;
}

Eigen::VectorXd h1_smooth(const BoundaryCurve& curve, const Eigen::VectorXd& g, double eta,
                          double alpha) {
  const int n = curve.n();
  if (g.size() != n) throw shape_mismatch("h1_smooth: gradient size mismatch");
  if (eta < 0.0) throw std::domain_error("h1_smooth: eta must be nonnegative");

  using SpMatR = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * static_cast<std::size_t>(n));
  for (int e = 0; e < n; ++e) {
    const int ip = (e + 1) % n;
    const double c = eta / curve.edge_length(e);
    trips.emplace_back(e, e, c);
    trips.emplace_back(ip, ip, c);
    trips.emplace_back(e, ip, -c);
    trips.emplace_back(ip, e, -c);
  }
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, curve.weight(i));
  SpMatR A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());

  Eigen::SimplicialLDLT<SpMatR> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw singular_matrix_error("h1_smooth: factorization failed");
  Eigen::VectorXd delta = ldlt.solve(alpha * g);
  if (ldlt.info() != Eigen::Success) throw singular_matrix_error("h1_smooth: solve failed");
  return delta;
}

bool descent_step(const InversionProblem& problem, const InversionConfig& config,
                  InversionState& state, Family family) {
  const GradientPair grads = gradient_functionals(problem, state.current);
  const bool on_lambda = (family == Family::Lambda);
  const Eigen::VectorXd& g = on_lambda ? grads.g_lambda : grads.g_mu;
  const double eta = on_lambda ? state.eta1 : state.eta2;
  double& alpha = on_lambda ? state.alpha1 : state.alpha2;
  const double alpha_cap = on_lambda ? config.alpha1 : config.alpha2;

  const Eigen::VectorXd delta = h1_smooth(*problem.curve, g, eta, 1.0);

  while (alpha >= config.alpha_min) {
    ImpedanceField trial = state.imp;
    if (on_lambda) {
      for (int i = 0; i < trial.n(); ++i) {
        const double im = std::max(0.0, trial.lambda[i].imag() - alpha * delta[i]);
        trial.lambda[i] = Complex(trial.lambda[i].real(), im);
      }
    } else {
      for (int i = 0; i < trial.n(); ++i) {
        const double re = std::max(trial.c_min, trial.mu[i].real() - alpha * delta[i]);
        trial.mu[i] = Complex(re, trial.mu[i].imag());
      }
    }
    CostEval ev = eval_cost(problem, trial);
    if (ev.misfit.F <= state.current.misfit.F) {
      state.imp = std::move(trial);
      state.current = std::move(ev);
      alpha = std::min(alpha * config.alpha_growth, alpha_cap);
      return true;
    }
    alpha *= 0.5;
  }
  return false;
}

InversionState reconstruct(const InversionProblem& problem, const InversionConfig& config,
                           const ImpedanceField& initial) {
  if (!problem.curve) throw config_error("reconstruct: curve required");
  if (!config.optimize_lambda && !config.optimize_mu) {
    throw config_error("reconstruct: at least one coefficient family must be active");
  }
  if (initial.n() != problem.curve->n()) {
    throw shape_mismatch("reconstruct: coefficient count must match boundary nodes");
  }
  initial.validate();

  InversionState state;
  state.imp = initial;
  state.current = eval_cost(problem, initial);
  state.alpha1 = config.alpha1;
  state.alpha2 = config.alpha2;
  state.eta1 = config.eta1;
  state.eta2 = config.eta2;
  state.lambda_exhausted = !config.optimize_lambda;
  state.mu_exhausted = !config.optimize_mu;

  const auto record = [&state](int iter) {
    HistoryRow row;
    row.iter = iter;
    row.f = state.current.misfit.F;
    row.error =
        state.current.misfit.error.value_or(std::numeric_limits<double>::quiet_NaN());
    row.alpha1 = state.alpha1;
    row.alpha2 = state.alpha2;
    row.eta1 = state.eta1;
    row.eta2 = state.eta2;
    state.history.push_back(row);
  };
  record(0);

  const double f_floor = config.f_stop_rel * state.current.misfit.norm_obs_sq;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    if (state.lambda_exhausted && state.mu_exhausted) break;
    if (state.current.misfit.F <= f_floor) break;
    if (iter > 1 && (iter - 1) % config.eta_every == 0) {
      state.eta1 = std::max(config.eta_floor, state.eta1 * config.eta_decay);
      state.eta2 = std::max(config.eta_floor, state.eta2 * config.eta_decay);
    }

    Family family = ((iter - 1) % 2 == 0) ? Family::Lambda : Family::Mu;
    if (family == Family::Lambda && state.lambda_exhausted) family = Family::Mu;
    if (family == Family::Mu && state.mu_exhausted) family = Family::Lambda;

    const bool accepted = descent_step(problem, config, state, family);
    if (!accepted) {
      (family == Family::Lambda ? state.lambda_exhausted : state.mu_exhausted) = true;
    }
    state.iterations = iter;
    record(iter);
  }
  return state;
}

void write_history_csv(const std::vector<HistoryRow>& rows, std::ostream& os) {
  os << "iter,F,Error,alpha1,alpha2,eta1,eta2\n";
  char buf[256];
  for (const HistoryRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.f,
                  r.error, r.alpha1, r.alpha2, r.eta1, r.eta2);
    os << buf;
  }
}

void write_coefficients_csv(const BoundaryCurve& curve, const ImpedanceField& imp,
                            std::ostream& os) {
  if (imp.n() != curve.n()) throw shape_mismatch("write_coefficients_csv: size mismatch");
  os << "theta,Re_lambda,Im_lambda,Re_mu,Im_mu\n";
  char buf[512];
  for (int i = 0; i < curve.n(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", curve.polar_angle(i),
                  imp.lambda[i].real(), imp.lambda[i].imag(), imp.mu[i].real(),
                  imp.mu[i].imag());
    os << buf;
  }
}

}  // namespace gibc

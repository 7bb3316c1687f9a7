// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_HARNESS_HPP
#define GIBC_HARNESS_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibc/inverse.hpp"

namespace gibc {

enum class ExperimentKind { Standard, TwoStep, MieSelfTest, ContinuitySlope, StabilityPairs };
enum class ApertureMode { Tiled, Full, HalfPlane };
enum class ProfileKind { Constant, Cos2, Sin2, Step };

// Named coefficient profiles over the polar angle; `value` is the level of
// the constant profile and is ignored by the functional ones.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::Constant;
  double value = 1.0;
};

double profile_value(const ProfileSpec& spec, double theta);

// Flat key=value experiment description; unknown keys are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Standard;

  // Inversion geometry.
  std::string shape = "ellipse";  // ellipse | circle | perturbed-ellipse
  double a = 0.4;
  double b = 0.3;
  double gamma = 0.0;
  int modes = 20;
  // Data (truth) geometry; empty shape inherits the inversion geometry.
  std::string data_shape;
  double data_gamma = -1.0;  // negative: inherit gamma

  double k = 9.0;
  bool rescaled = true;
  double radius = 0.8;  // truncation circle R

  int waves = 10;
  int per_aperture = 20;
  ApertureMode aperture = ApertureMode::Tiled;
  double incident_offset = 0.0;

  int inv_nb = 128;
  int inv_nr = 12;
  int data_nb = 192;
  int data_nr = 18;
  double grading = 1.15;
  int dtn_boost = 10;

  double sigma = 0.01;
  unsigned long long seed = 1;

  ProfileSpec lambda_profile;  // Im lambda truth
  ProfileSpec mu_profile;      // Re mu truth
  double init_lambda = 0.5;    // Im part of the initial guess
  double init_mu = 0.5;        // Re part of the initial guess
  bool optimize_lambda = true;
  bool optimize_mu = true;
  double c_min = 0.01;

  InversionConfig inversion;

  // Two-step refinement stage; zero resolutions inherit stage one.
  double second_k = 24.0;
  int second_inv_nb = 0;
  int second_inv_nr = 0;
  int second_data_nb = 0;
  int second_data_nr = 0;

  std::string out_dir = "out";
  bool same_mesh = false;

  void validate() const;  // throws config_error naming the offending key
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_text(const std::string& text);
// Canonical serialization; parsing it back reproduces the config exactly.
void write_config(const ExperimentConfig& config, std::ostream& os);

std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);      // throws config_error if unknown
ExperimentConfig preset_config(const std::string& name);

struct SyntheticData {
  FarFieldData clean;
  FarFieldData noisy;
};

// Truth-geometry solve on the data mesh with boosted DtN order, then exact
// per-aperture noise injection.
SyntheticData generate_synthetic(const ExperimentConfig& config);

struct ExperimentResult {
  ExperimentConfig config;

  // Inversion kinds.
  std::optional<SyntheticData> data;
  std::optional<InversionState> state;
  std::optional<InversionState> first_stage;  // two-step only
  std::vector<double> truth_lambda_im;        // truth profiles on inversion nodes
  std::vector<double> truth_mu_re;
  double error_vs_noisy = 0.0;
  double error_vs_clean = 0.0;

  // mie-selftest.
  double mie_err_coarse = 0.0;
  double mie_err_fine = 0.0;
  double mie_ratio = 0.0;

  // continuity-slope.
  std::vector<double> slope_gammas;
  std::vector<double> slope_norms;
  double slope = 0.0;

  // stability-pairs.
  std::vector<std::array<double, 4>> stability_values;  // mu1 arcs, mu2 arcs
  std::vector<double> stability_ratios;
  double stability_spread = 0.0;

  bool passed = true;
  std::string summary;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Forward solve with the truth coefficients on the inversion discretization;
// writes farfield.txt + summary.txt into config.out_dir.
FarFieldData run_forward(const ExperimentConfig& config);

// generate_synthetic + data_clean.txt / data_noisy.txt in config.out_dir.
SyntheticData run_synth(const ExperimentConfig& config);

// CSV + SVG + summary bundle in result.config.out_dir.
void emit_report(const ExperimentResult& result);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void write_svg_chart(const std::vector<SvgSeries>& series, const std::string& title,
                     std::ostream& os);

}  // namespace gibc

#endif  // GIBC_HARNESS_HPP

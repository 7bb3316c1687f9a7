// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gibc/errors.hpp"
#include "gibc/farfield.hpp"
#include "gibc/harness.hpp"
#include "oracles.hpp"

using namespace gibc;
namespace fs = std::filesystem;

namespace {
constexpr double kPi = 3.14159265358979323846;

fs::path scratch_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "gibc-harness-tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  write_config(cfg, os);
  return os.str();
}

ExperimentConfig tiny_config(const std::string& out_dir) {
  ExperimentConfig cfg = parse_config_text(
      "kind=standard\n"
      "shape=ellipse\n"
      "a=0.4\n"
      "b=0.3\n"
      "k=9\n"
      "waves=2\n"
      "per_aperture=8\n"
      "aperture=full\n"
      "sigma=0.02\n"
      "seed=3\n"
      "inv_nb=64\n"
      "inv_nr=6\n"
      "data_nb=96\n"
      "data_nr=9\n"
      "max_iter=2\n"
      "out_dir=" +
      out_dir + "\n");
  cfg.validate();
  return cfg;
}

double weighted_norm(const Eigen::VectorXcd& v, const std::vector<double>& w) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += w[i] * std::norm(v[i]);
  return std::sqrt(s);
}

#ifdef GIBC_TOOL_PATH
int run_tool(const std::string& args) {
  const std::string cmd = std::string(GIBC_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif
}  // namespace

TEST_CASE("profile values") {
  CHECK(profile_value({ProfileKind::Constant, 0.75}, 2.1) == 0.75);
  CHECK(profile_value({ProfileKind::Cos2, 9.0}, 0.0) == doctest::Approx(1.0));
  CHECK(profile_value({ProfileKind::Cos2, 9.0}, kPi / 2) == doctest::Approx(0.5));
  CHECK(profile_value({ProfileKind::Sin2, 9.0}, 0.0) == doctest::Approx(0.5));
  CHECK(profile_value({ProfileKind::Sin2, 9.0}, kPi / 2) == doctest::Approx(1.0));
  CHECK(profile_value({ProfileKind::Step, 9.0}, 0.3) == 1.0);
  CHECK(profile_value({ProfileKind::Step, 9.0}, kPi) == 0.5);
  CHECK(profile_value({ProfileKind::Step, 9.0}, 2.0 * kPi + 0.3) == 1.0);
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    (void)parse_config_text("kind=standard\nbogus_key=1\n");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("validation names the offending key") {
  ExperimentConfig cfg = tiny_config("unused");

  ExperimentConfig bad = cfg;
  bad.waves = 0;
  CHECK_THROWS_AS(bad.validate(), config_error);

  bad = cfg;
  bad.grading = 0.9;
  CHECK_THROWS_AS(bad.validate(), config_error);

  bad = cfg;
  bad.sigma = -0.01;
  CHECK_THROWS_AS(bad.validate(), config_error);

  bad = cfg;
  bad.data_nb = bad.inv_nb;  // violates the separation requirement
  try {
    bad.validate();
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("data_nb") != std::string::npos);
  }
  bad.same_mesh = true;  // inverse-crime studies opt in explicitly
  bad.data_nr = bad.inv_nr;
  CHECK_NOTHROW(bad.validate());

  CHECK_THROWS_AS((void)parse_config_text("kind=nonsense\n"), config_error);
  CHECK_THROWS_AS((void)parse_config_text("aperture=diagonal\n"), config_error);
}

TEST_CASE("canonical serialization is a fixed point") {
  for (const std::string& name : preset_names()) {
    INFO("preset ", name);
    const ExperimentConfig direct = preset_config(name);
    CHECK_NOTHROW(direct.validate());
    const std::string once = canonical_text(direct);
    const ExperimentConfig reparsed = parse_config_text(once);
    CHECK(canonical_text(reparsed) == once);
    CHECK(canonical_text(parse_config_text(preset_text(name))) == once);
  }
  CHECK_FALSE(preset_names().empty());
  CHECK_THROWS_AS((void)preset_text("no-such-preset"), config_error);
  CHECK_THROWS_AS((void)preset_config("no-such-preset"), config_error);
}

TEST_CASE("synthetic data honours sigma exactly") {
  const ExperimentConfig cfg = tiny_config(scratch_dir("synth").string());
  const SyntheticData data = generate_synthetic(cfg);
  CHECK(data.clean.provenance == FarFieldData::Provenance::SyntheticClean);
  CHECK(data.noisy.provenance == FarFieldData::Provenance::SyntheticNoisy);
  REQUIRE(data.clean.samples.size() == 2);
  for (std::size_t j = 0; j < data.clean.samples.size(); ++j) {
    const auto& w = data.clean.dirs.apertures[j].weights;
    const double num = weighted_norm(data.noisy.samples[j] - data.clean.samples[j], w);
    const double den = weighted_norm(data.clean.samples[j], w);
    CHECK(std::abs(num / den - cfg.sigma) <= 1e-12);
  }

  const SyntheticData again = generate_synthetic(cfg);
  for (std::size_t j = 0; j < data.noisy.samples.size(); ++j) {
    for (int q = 0; q < data.noisy.samples[j].size(); ++q) {
      CHECK(again.noisy.samples[j][q] == data.noisy.samples[j][q]);
    }
  }

  ExperimentConfig quiet = cfg;
  quiet.sigma = 0.0;
  const SyntheticData clean = generate_synthetic(quiet);
  for (std::size_t j = 0; j < clean.clean.samples.size(); ++j) {
    for (int q = 0; q < clean.clean.samples[j].size(); ++q) {
      CHECK(clean.noisy.samples[j][q] == clean.clean.samples[j][q]);
    }
  }
}

TEST_CASE("run_synth writes readable matched files") {
  const fs::path dir = scratch_dir("run-synth");
  const ExperimentConfig cfg = tiny_config(dir.string());
  const SyntheticData data = run_synth(cfg);
  REQUIRE(fs::exists(dir / "data_clean.txt"));
  REQUIRE(fs::exists(dir / "data_noisy.txt"));
  std::ifstream in(dir / "data_noisy.txt");
  const FarFieldData back = read_farfield(in);
  const MisfitResult diff = misfit(back, data.noisy);
  REQUIRE(diff.error.has_value());
  CHECK(*diff.error <= 1e-16);
}

TEST_CASE("experiment bundles are byte-identical across reruns") {
  const fs::path dir_a = scratch_dir("det-a");
  const fs::path dir_b = scratch_dir("det-b");

  ExperimentConfig cfg = preset_config("determinism-mini");
  cfg.out_dir = dir_a.string();
  ExperimentResult res_a = run_experiment(cfg);
  emit_report(res_a);

  cfg.out_dir = dir_b.string();
  ExperimentResult res_b = run_experiment(cfg);
  emit_report(res_b);

  CHECK(res_a.passed);
  CHECK(res_b.passed);
  CHECK(res_a.error_vs_clean == res_b.error_vs_clean);

  REQUIRE(res_a.truth_lambda_im.size() == static_cast<std::size_t>(cfg.inv_nb));
  if (cfg.lambda_profile.kind == ProfileKind::Constant) {
    for (double v : res_a.truth_lambda_im) CHECK(v == res_a.truth_lambda_im.front());
  }

  std::vector<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(dir_a)) {
    if (e.is_regular_file()) names_a.push_back(e.path().filename().string());
  }
  for (const auto& e : fs::directory_iterator(dir_b)) {
    if (e.is_regular_file()) names_b.push_back(e.path().filename().string());
  }
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  REQUIRE_FALSE(names_a.empty());
  REQUIRE(names_a == names_b);
  for (const std::string& name : names_a) {
    if (name == "config.txt") continue;  // records the differing out_dir
    INFO("file ", name);
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
}

TEST_CASE("two-step reports size per-stage files to their own meshes") {
  const fs::path dir = scratch_dir("two-step");
  ExperimentConfig cfg = tiny_config(dir.string());
  cfg.kind = ExperimentKind::TwoStep;
  cfg.second_k = 9.0;
  cfg.second_inv_nb = 80;
  cfg.second_inv_nr = 6;
  cfg.second_data_nb = 120;
  cfg.second_data_nr = 9;
  cfg.inversion.max_iterations = 1;
  cfg.validate();

  const ExperimentResult res = run_experiment(cfg);
  emit_report(res);

  REQUIRE(res.state.has_value());
  REQUIRE(res.first_stage.has_value());
  CHECK(res.first_stage->imp.n() == cfg.inv_nb);
  CHECK(res.state->imp.n() == cfg.second_inv_nb);
  CHECK(res.truth_lambda_im.size() == static_cast<std::size_t>(cfg.second_inv_nb));

  const auto data_rows = [&](const std::string& name) {
    const std::string text = slurp(dir / name);
    return std::count(text.begin(), text.end(), '\n') - 1;  // minus header
  };
  CHECK(data_rows("stage1_coefficients.csv") == cfg.inv_nb);
  CHECK(data_rows("coefficients.csv") == cfg.second_inv_nb);
  CHECK(data_rows("truth_coefficients.csv") == cfg.second_inv_nb);
  CHECK(data_rows("initial_coefficients.csv") == cfg.second_inv_nb);
}

TEST_CASE("svg charts are well-formed xml") {
  std::vector<SvgSeries> series(2);
  series[0].label = "truth";
  series[1].label = "recovered";
  for (int i = 0; i <= 20; ++i) {
    const double x = 2.0 * kPi * i / 20;
    series[0].x.push_back(x);
    series[0].y.push_back(std::sin(x));
    series[1].x.push_back(x);
    series[1].y.push_back(std::sin(x) + 0.05);
  }
  std::ostringstream os;
  write_svg_chart(series, "impedance profiles", os);
  const std::string svg = os.str();
  std::string why;
  CHECK_MESSAGE(oracle::xml_well_formed(svg, &why), why);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("impedance profiles") != std::string::npos);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines >= 2);
}

#ifdef GIBC_TOOL_PATH
TEST_CASE("command line tool contracts") {
  const fs::path dir = scratch_dir("cli");

  CHECK(run_tool("preset --list") == 0);

  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "kind=nonsense\n";
  CHECK(run_tool("forward " + bad.string()) == 2);
  CHECK(run_tool("invert " + dir.string() + "/missing.cfg") == 2);

  const fs::path good = dir / "forward.cfg";
  {
    const ExperimentConfig cfg = tiny_config((dir / "fwd-out").string());
    std::ofstream os(good);
    write_config(cfg, os);
  }
  CHECK(run_tool("forward " + good.string()) == 0);
  CHECK(fs::exists(dir / "fwd-out" / "farfield.txt"));
  CHECK(fs::exists(dir / "fwd-out" / "summary.txt"));
  std::ifstream in(dir / "fwd-out" / "farfield.txt");
  const FarFieldData ff = read_farfield(in);
  CHECK(ff.samples.size() == 2);
}
#endif

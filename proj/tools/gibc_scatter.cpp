// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gibc/errors.hpp"
#include "gibc/harness.hpp"

namespace {

gibc::ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw gibc::config_error("cannot open config file '" + path + "'");
  return gibc::parse_config(is);
}

struct Overrides {
  std::string out_dir;
  unsigned long long seed = 0;
  bool has_seed = false;
  bool same_mesh = false;
};

void apply(const Overrides& ov, gibc::ExperimentConfig& cfg) {
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (ov.has_seed) cfg.seed = ov.seed;
  if (ov.same_mesh) cfg.same_mesh = true;
  cfg.validate();
}

int run_and_report(const gibc::ExperimentConfig& cfg) {
  const gibc::ExperimentResult res = gibc::run_experiment(cfg);
  gibc::emit_report(res);
  std::cout << res.summary;
  std::cout << "report written to " << cfg.out_dir << "\n";
  return res.passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D Helmholtz scattering with generalized impedance boundary conditions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  Overrides ov;
  bool list_presets = false;

  const auto add_common = [&ov](CLI::App* sub) {
    sub->add_option("--out-dir", ov.out_dir, "override the output directory");
    sub->add_option("--seed", ov.seed, "override the RNG seed")
        ->each([&ov](const std::string&) { ov.has_seed = true; });
    sub->add_flag("--same-mesh", ov.same_mesh,
                  "generate data on the inversion mesh (fixed-point testing only)");
  };

  CLI::App* fwd = app.add_subcommand("forward", "far field of the truth coefficients");
  fwd->add_option("config", config_path, "experiment config file")->required();
  add_common(fwd);

  CLI::App* synth = app.add_subcommand("synth", "write clean + noisy synthetic data");
  synth->add_option("config", config_path, "experiment config file")->required();
  add_common(synth);

  CLI::App* invert = app.add_subcommand("invert", "run the experiment described by the config");
  invert->add_option("config", config_path, "experiment config file")->required();
  add_common(invert);

  CLI::App* preset = app.add_subcommand("preset", "run a named preset experiment");
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", list_presets, "list preset names and exit");
  add_common(preset);

  CLI::App* selftest = app.add_subcommand("selftest", "forward solver vs analytic circle");
  add_common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (fwd->parsed()) {
      gibc::ExperimentConfig cfg = load_config(config_path);
      apply(ov, cfg);
      gibc::run_forward(cfg);
      std::cout << "far field written to " << cfg.out_dir << "\n";
      return 0;
    }
    if (synth->parsed()) {
      gibc::ExperimentConfig cfg = load_config(config_path);
      apply(ov, cfg);
      gibc::run_synth(cfg);
      std::cout << "synthetic data written to " << cfg.out_dir << "\n";
      return 0;
    }
    if (invert->parsed()) {
      gibc::ExperimentConfig cfg = load_config(config_path);
      apply(ov, cfg);
      return run_and_report(cfg);
    }
    if (preset->parsed()) {
      if (list_presets) {
        for (const auto& name : gibc::preset_names()) std::cout << name << "\n";
        return 0;
      }
      if (preset_name.empty()) throw gibc::config_error("preset: name required");
      gibc::ExperimentConfig cfg = gibc::preset_config(preset_name);
      apply(ov, cfg);
      return run_and_report(cfg);
    }
    // selftest
    gibc::ExperimentConfig cfg = gibc::preset_config("mie-selftest");
    apply(ov, cfg);
    return run_and_report(cfg);
  } catch (const gibc::config_error& e) {
    std::cerr << e.what() << "\n";  // message already carries the "config error:" prefix
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnd/kernel.hpp"
#include "rnd/selection.hpp"
#include "rnd/synth.hpp"

namespace rnd {

// How the subsample size of a Nystrom fit is chosen.
struct SubsampleRule {
  enum class Kind { automatic, fixed, fraction } kind = Kind::automatic;
  Index fixed = 0;
  double fraction = 0.0;

  static SubsampleRule parse(const std::string& text);
};

// One flat configuration record shared by the CLI subcommands.  The
// defaults reproduce the reference experiments.
struct RunConfig {
  // kernel
  KernelFamily kernel_family = KernelFamily::gaussian;
  double bandwidth = 1.0;
  int poly_degree = 2;
  double poly_offset = 1.0;
  double poly_radius = 10.0;

  // synthetic pair
  double sigma_p = 1.0;
  double sigma_q = 0.8;
  Index d = 1;

  // selection policy
  SelectionPolicy policy;

  // experiment grids
  std::vector<Index> grid_sizes = {250, 500, 1000, 2000, 4000};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Index> bench_nystrom_sizes = {2000, 4000, 8000, 16000};
  std::vector<Index> bench_full_sizes = {250, 500, 1000, 2000};

  // run controls
  Index mc_points = 20000;
  // p-subsample cap used when estimating the capacity sup during parameter
  // selection; 0 means the full sample.
  Index capacity_probe = 400;
  SubsampleRule subsample;
  std::string mode = "nystrom";  // estimate subcommand: nystrom | full
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  Index effdim_grid = 20;

  KernelSpec kernel() const;
  SyntheticPair pair() const;
};

// TOML-style configuration: [section] headers, key = value lines, '#'
// comments; lists are whitespace- or comma-separated.  Unknown keys are an
// error so typos do not silently fall back to defaults.
RunConfig load_config(const std::string& path, RunConfig base = {});
void apply_config_line(RunConfig& cfg, const std::string& section, const std::string& key,
                       const std::string& value);

}  // namespace rnd

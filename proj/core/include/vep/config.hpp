#pragma once

#include <map>
#include <string>
#include <vector>

#include "vep/material.hpp"
#include "vep/mesh.hpp"
#include "vep/stepper.hpp"

namespace vep {

/// Plain key=value run configuration.  Unknown keys are rejected; every run
/// writes the fully resolved configuration next to its outputs so reruns are
/// reproducible from the artifact alone.
struct Config {
  std::string scenario = "rest";

  double lx = 1.0, ly = 1.0;
  int nx = 32, ny = 32;
  std::string bc_left = "dirichlet", bc_right = "dirichlet";
  std::string bc_bottom = "dirichlet", bc_top = "dirichlet";
  bool allow_all_slip = false;

  double T = 0.5;
  int N = 50;

  MaterialParams params;

  double forcing_amp = 3.0;
  double forcing_omega = 0.0;
  double init_amp = 1.0;

  SolverOptions opts;

  int dict_size = 24;
  int dict_levels = 4;
  int st_samples = 200;

  std::string out_dir = "out";
  int threads = 1;
  unsigned seed = 0;
  bool certify_during_run = true;
  bool envar_optimized_weight = false;

  std::vector<int> study_levels = {25, 50, 100};
  std::vector<double> gamma_list = {1e-1, 1e-2, 1e-3};
  std::vector<int> space_levels = {16, 32, 64};

  static Config parse_file(const std::string& path);
  static Config parse_lines(const std::vector<std::string>& lines);

  void validate() const;
  std::string resolved() const;  // full key=value dump

  BoundarySpec boundary_spec() const;
  Mesh make_mesh() const;
};

}  // namespace vep

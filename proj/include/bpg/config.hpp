#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bpg {

/// Experiment configuration parsed from line-oriented `key = value` text.
/// Blank lines and lines starting with '#' are ignored; unknown or
/// duplicated keys are parse errors reporting the line number.
struct ExperimentConfig {
  // problem
  std::string problem_kind; // diag-cluster | lap-slit | lap-rect | file
  int problem_n = 0;
  int problem_h = 0; // integer 1/h for lap-slit
  int problem_nx = 0, problem_ny = 0;
  double problem_hx = 0.0, problem_hy = 0.0;
  std::string problem_m_file, problem_a_file;

  // preconditioner
  std::string precond_kind = "exact-inverse";
  double precond_droptol = 0.0;
  double precond_eta = 0.0;
  double precond_density = 0.0;
  std::uint64_t precond_seed = 1;
  std::string precond_file;

  // iteration
  int s = 6;
  int j = 0; // 0 means default (= s)
  std::vector<int> track_i;
  int runs = 100;
  std::uint64_t seed_base = 1;
  int max_steps = 200;
  double tol = 1e-10;
  std::string mode = "bpg"; // bpg | pinvit

  // bounds and output
  std::vector<std::string> bounds;
  std::string outdir;

  /// validated, fully resolved key/value view for config echoes
  std::map<std::string, std::string> echo() const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

} // namespace bpg

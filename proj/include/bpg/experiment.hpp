#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bpg/analysis.hpp"
#include "bpg/config.hpp"
#include "bpg/problems.hpp"
#include "bpg/ritz.hpp"

namespace bpg {

/// Everything assembled from an ExperimentConfig: the pair, its
/// factorization, the preconditioner with its measured quality, and the
/// reference spectrum for error and phase columns.
struct Experiment {
  ExperimentConfig cfg;
  Problem problem;
  std::unique_ptr<CholFactor> a_chol;
  Preconditioner precond;
  PrecondQuality quality{1.0, 1.0, 1.0, 0.0};
  Spectrum reference;

  EigContext context() const;
};

Experiment assemble(const ExperimentConfig& cfg);

/// Reference spectrum for a problem: exact for the diagonal pair, dense for
/// small problems, Lanczos extremes otherwise (leading_k values).
Spectrum reference_spectrum(const Problem& p, const CholFactor* a_chol, int leading_k);

struct BatchResult {
  std::vector<IterTrace> traces; // one per seed, in seed order
  int slowest_index = -1;        // run maximizing the final-step error sum
  std::vector<double> max_final_error; // per i (1..s), max over runs
};

/// Execute cfg.runs seeded runs; when gammas is true, measure per-step
/// gamma samples for every tracked index through the auxiliary iteration
/// started from the phase-entry iterate, and merge them into the traces.
BatchResult run_batch(const Experiment& ex, bool gammas);

/// cmd_run: run the batch and write one trace CSV per run plus summary.csv
/// and slowest.csv into cfg.outdir.
void cmd_run(const ExperimentConfig& cfg);

struct BoundsOutcome {
  std::vector<BoundCurve> curves;
  ValidationReport report;
};

/// cmd_bounds core: build the configured curves at the trace's phase-entry
/// reset and validate. q_override >= 0 forces the quality parameter
/// (labelled heuristic when taken from the scaling-based gamma).
BoundsOutcome evaluate_bounds(const IterTrace& trace, const Spectrum& sp,
                              const std::vector<std::string>& kinds,
                              const std::vector<int>& track_i, int s, int j,
                              double q_override, const std::string& q_label);

void cmd_bounds(const std::string& trace_path, const std::string& spectrum_path,
                const std::vector<std::string>& kinds, double q_override,
                const std::string& outdir, bool* validated);

/// cmd_report: read summary + slowest trace + bound CSVs from dir, emit one
/// SVG per preconditioner run directory.
void cmd_report(const std::string& dir, const std::string& out_path);

/// max over valid per-step samples for index i in a trace; negative when no
/// valid sample exists
double max_gamma_for(const IterTrace& trace, int i);

} // namespace bpg

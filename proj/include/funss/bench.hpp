#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "funss/dataset.hpp"
#include "funss/io.hpp"
#include "funss/simgen.hpp"

namespace funss {

enum class BenchTask { kFpca, kFlr };

/// One Monte Carlo comparison run: samplers x subsample sizes x replicates on
/// a single dataset, with the full-sample estimators as the reference.
struct ExperimentConfig {
  SimDesign design;
  std::vector<std::string> samplers = {"unif", "impo", "funprinss"};
  std::vector<int> c_list = {100, 300, 1000};
  int rank = 5;
  int replicates = 200;
  std::uint64_t seed = 0;
  BenchTask task = BenchTask::kFpca;
  double alpha = 0.5;  // pilot mixture weight
  int c_pilot = 0;     // 0: reuse C as the pilot size
  double beta = 1.0;   // near-exactness factor fed to the bound overlay
  // Test mode: every replicate uses the exhaustive identity draw (one visit
  // per sample, C forced to N), so all error metrics collapse to zero.
  bool identity_draw_mode = false;
};

/// Known sampler identifiers: unif, impo, funprinss (two-step pilot),
/// funprinss-exact (full-sample probability, ablation only).
bool is_known_sampler(const std::string& name);

/// Generates data from config.design and runs the experiment.
ResultTable run_experiment(const ExperimentConfig& config);

/// Core entry point on externally supplied (uncentered) data. raw_y may be
/// null for the FPCA task; for the FLR task it must be present.
ResultTable run_experiment(const ExperimentConfig& config, const FunctionalDataset& raw_x,
                           const ResponseVector* raw_y);

/// Evaluates the concentration-bound formulas over c_list and an eps grid
/// (empty grid: eps(C) = 3 x the feasibility threshold). Emits theory_* rows.
ResultTable run_bound_overlay(const ExperimentConfig& config,
                              const std::vector<double>& eps_grid);

ResultTable run_bound_overlay(const ExperimentConfig& config, const std::vector<double>& eps_grid,
                              const FunctionalDataset& raw_x, const ResponseVector* raw_y);

}  // namespace funss

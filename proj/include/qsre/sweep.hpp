#pragma once

// Parameter sweeps over experiment configs.
//
// Sweep file:
//   {"base": {...experiment config...},
//    "grid": {"model.params.hx": [0, 0.5], "ensemble.n_qubits": [6, 8]},
//    "output": {"directory": "runs/sweep"}}
// or {"configs": [{...}, {...}], "output": {...}}. Grid keys are dotted
// paths into the config; the product is taken with the last key varying
// fastest (keys in sorted order).

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsre/runner.hpp"

namespace qsre {

inline constexpr const char* kSweepColumns =
    "run,model,params,ensemble,n_qubits,quantity,region_size,value,ensemble_std,stderr,haar_value,"
    "relative_difference,relative_difference_stderr";

/// Expands a sweep description into configs, each with its own output
/// directory run_NNN under the sweep directory. All configs must share the
/// measures block; ConfigError otherwise. An empty grid axis or config list
/// yields no configs.
std::vector<ExperimentConfig> expand_sweep(const nlohmann::json& sweep, std::string_view profile = "desk");

struct SweepResult {
  std::filesystem::path table;
  std::vector<RunResult> runs;
  bool ok = true;
};

/// Runs every config and writes sweep_summary.csv (header only when empty).
SweepResult run_sweep(const nlohmann::json& sweep, std::string_view profile = "desk", const RunOptions& opts = {});

std::filesystem::path sweep_output_dir(const nlohmann::json& sweep);

}  // namespace qsre

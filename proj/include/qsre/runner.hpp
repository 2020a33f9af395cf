#pragma once

// Experiment orchestration: ensemble generation, quench evolution, measure
// recording, ensemble and long-time averaging, Haar comparison and output.
//
// Output directory layout (schema version kOutputSchemaVersion):
//   config.resolved.json   canonical config actually run
//   measures.csv           per (time, realization, SRE index) rows
//   entropy_profile.csv    per (time, realization, region size), optional
//   ensemble.csv           per-time ensemble mean and std of each quantity
//   summary.csv            long-time window averages vs Haar baselines
//   otoc.csv               optional
//   manifest.json          hash, revision, wall time, status, failures
//   checkpoints/           per-realization state + rows while running

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qsre/config.hpp"

namespace qsre {

inline constexpr int kOutputSchemaVersion = 1;

inline constexpr const char* kMeasuresColumns =
    "time,realization,alpha,S1_avg,S2_avg,S3_avg,M2,M2_lin,antiflatness_halfchain,log_antiflatness_halfchain";
inline constexpr const char* kProfileColumns = "time,realization,region_size,S1_avg,S2_avg,S3_avg";
inline constexpr const char* kEnsembleColumns = "time,quantity,region_size,mean,std,M";
inline constexpr const char* kSummaryColumns =
    "quantity,region_size,value,ensemble_std,stderr,haar_value,relative_difference,relative_difference_stderr,"
    "window,M";

/// One measures.csv row. M2 / M2_lin hold M_alpha and its linearized form
/// for the row's SRE index; entropies and anti-flatness are half-chain
/// averages over the N ring windows (nats).
struct MeasureRow {
  double time = 0.0;
  int realization = 0;
  int alpha = 2;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double m = 0.0, m_lin = 0.0;
  double antiflatness = 0.0, log_antiflatness = 0.0;
};

struct ProfileRow {
  double time = 0.0;
  int realization = 0;
  int region_size = 0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

struct SummaryRow {
  std::string quantity;
  int region_size = 0;
  double value = 0.0;
  double ensemble_std = 0.0;
  double stderr_mean = 0.0;
  double haar_value = 0.0;
  double relative_difference = 0.0;
  double relative_difference_stderr = 0.0;
  int window = 0;
  int realizations = 0;
};

struct RunOptions {
  int threads = 0;  // 0 keeps the OpenMP default
  bool resume = false;
  /// Test hook, called after every checkpoint write; returning true stops
  /// that realization there, leaving the checkpoint for a later resume.
  std::function<bool(int realization, int step)> interrupt;
};

struct RunResult {
  std::filesystem::path directory;
  std::string status;  // "ok" | "failed" | "interrupted"
  std::vector<std::pair<int, std::string>> failures;
  std::vector<SummaryRow> summary;
  double wall_seconds = 0.0;
};

/// Runs the whole pipeline and writes the directory above. Realizations run
/// concurrently; every file is written by one thread in a fixed order, so
/// the CSVs are byte-identical for any thread count. A realization that
/// throws is recorded in the manifest and excluded from the averages.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Continues an interrupted run from the checkpoints in `dir`, using the
/// config.resolved.json stored there.
RunResult resume_experiment(const std::filesystem::path& dir, RunOptions opts = {});

/// Human-readable plan for dry runs (validates first).
std::string describe_plan(const ExperimentConfig& cfg);

/// Parsers for the CSV files written above.
std::vector<MeasureRow> read_measures_csv(const std::filesystem::path& path);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

/// Long-time aggregation from per-realization rows (exposed for tests).
std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<MeasureRow>& rows,
                                  const std::vector<ProfileRow>& profile);

}  // namespace qsre

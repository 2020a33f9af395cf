#pragma once

// Declarative experiment configuration. The file format is JSON whose keys
// mirror the struct fields below; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsre/ensembles.hpp"
#include "qsre/hamiltonian.hpp"
#include "qsre/propagator.hpp"

namespace qsre {

inline constexpr int kSreQubitCap = 14;
inline constexpr int kEntropyQubitCap = 16;

struct ModelConfig {
  std::string name = "tfim_l";  // "tfim_l" | "xxz_nnn"
  /// tfim_l: J, hz, hx.  xxz_nnn: delta, nnn.
  std::map<std::string, double> params{{"J", 1.0}, {"hz", 1.5}, {"hx", 0.5}};
};

struct EvolutionConfig {
  double dt = 2.0;
  double t_final = 1000.0;
  int save_every = 1;  // in steps
  int max_subspace = 30;
  double rel_tolerance = 1e-12;

  KrylovConfig krylov() const { return {dt, max_subspace, rel_tolerance, true}; }
};

struct OtocConfig {
  int v_site = 0;
  int w_site = 0;
  std::string v_op = "Z";
  std::string w_op = "Z";
  double dt = 0.25;
  double t_final = 10.0;
};

struct MeasuresConfig {
  /// Stabilizer Renyi indices; one measures.csv row per index.
  std::vector<int> alphas{2};
  /// Extra region sizes for entropy_profile.csv (S_1..S_3 per size).
  std::vector<int> region_sizes;
  bool sre = true;
  std::string sre_schedule = "all";  // "all" | "window"
  bool antiflatness = true;
  std::optional<OtocConfig> otoc;
};

struct AveragingConfig {
  int window = 50;  // last T saved samples
  std::string anchor = "end";
};

struct OutputConfig {
  std::string directory = "runs/default";
  std::vector<std::string> formats{"csv", "json"};
  int checkpoint_every = 0;             // steps; 0 disables
  double checkpoint_interval_seconds = 0.0;  // wall clock; 0 disables
};

struct ExperimentConfig {
  ModelConfig model;
  EnsembleSpec ensemble;
  EvolutionConfig evolution;
  MeasuresConfig measures;
  AveragingConfig averaging;
  OutputConfig output;
  std::uint64_t seed = 0;
  std::string profile = "desk";

  /// Throws ConfigError on inconsistent values and ResourceError when N is
  /// past the SRE or entropy caps.
  void validate() const;
  int total_steps() const;
  int saved_samples() const;
  int half_chain() const { return ensemble.n_qubits / 2; }
  /// Ensemble spec with the top-level seed filled in.
  EnsembleSpec ensemble_spec() const;
};

/// Named defaults: "desk" (N=10, M=20, t_final=1e3) or "paper"
/// (N=16, M=50, t_final=1e4; long running).
ExperimentConfig profile_defaults(std::string_view profile);

/// Overlays `j` on `base`. Throws ConfigError on unknown keys or bad types.
ExperimentConfig config_from_json(const nlohmann::json& j, const ExperimentConfig& base);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::filesystem::path& path, std::string_view profile = "desk");
/// Sorted keys, two-space indent, trailing newline.
std::string canonical_form(const ExperimentConfig& cfg);
/// FNV-1a 64 of the compact canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

PauliSumHamiltonian build_hamiltonian(const ExperimentConfig& cfg);

/// Directory for outputs: cfg.output.directory, placed under
/// $QSRE_OUTPUT_ROOT when that is set and the directory is relative.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

}  // namespace qsre

#include "qsre/sweep.hpp"

#include <cstdlib>
#include <fstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "qsre/errors.hpp"

namespace qsre {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void set_path(json& j, const std::string& dotted, const json& value) {
  json* cur = &j;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', pos);
    const std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (key.empty()) throw ConfigError(fmt::format("bad grid key '{}'", dotted));
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    pos = dot + 1;
  }
}

std::string params_label(const ExperimentConfig& c) {
  std::string s;
  for (const auto& [k, v] : c.model.params) s += fmt::format("{}{}={}", s.empty() ? "" : ";", k, v);
  return s;
}

}  // namespace

fs::path sweep_output_dir(const json& sweep) {
  std::string dir = "runs/sweep";
  if (sweep.contains("output") && sweep["output"].contains("directory"))
    dir = sweep["output"]["directory"].get<std::string>();
  fs::path p(dir);
  if (p.is_relative())
    if (const char* root = std::getenv("QSRE_OUTPUT_ROOT"); root && *root) return fs::path(root) / p;
  return p;
}

std::vector<ExperimentConfig> expand_sweep(const json& sweep, std::string_view profile) {
  if (!sweep.is_object()) throw ConfigError("sweep file must be an object");
  for (const auto& [k, _] : sweep.items())
    if (k != "base" && k != "grid" && k != "configs" && k != "output")
      throw ConfigError(fmt::format("unknown sweep key '{}'", k));
  if (sweep.contains("configs") && (sweep.contains("grid") || sweep.contains("base")))
    throw ConfigError("use either 'configs' or 'base' + 'grid'");

  std::vector<json> raw;
  if (sweep.contains("configs")) {
    for (const auto& c : sweep["configs"]) raw.push_back(c);
  } else {
    raw.push_back(sweep.value("base", json::object()));
    if (sweep.contains("grid")) {
      for (const auto& [key, values] : sweep["grid"].items()) {
        if (!values.is_array()) throw ConfigError(fmt::format("grid axis '{}' must be a list", key));
        std::vector<json> next;
        for (const auto& base : raw)
          for (const auto& v : values) {
            json c = base;
            set_path(c, key, v);
            next.push_back(std::move(c));
          }
        raw = std::move(next);
      }
    }
  }

  const fs::path root = sweep.contains("output") && sweep["output"].contains("directory")
                            ? fs::path(sweep["output"]["directory"].get<std::string>())
                            : fs::path("runs/sweep");
  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string prof(profile);
    if (raw[i].contains("profile")) prof = raw[i]["profile"].get<std::string>();
    ExperimentConfig c = config_from_json(raw[i], profile_defaults(prof));
    c.output.directory = (root / fmt::format("run_{:03d}", i)).string();
    c.validate();
    out.push_back(std::move(c));
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (to_json(out[i])["measures"] != to_json(out[0])["measures"])
      throw ConfigError(fmt::format("sweep config {} has a different measures block than config 0", i));
  return out;
}

SweepResult run_sweep(const json& sweep, std::string_view profile, const RunOptions& opts) {
  const auto cfgs = expand_sweep(sweep, profile);
  SweepResult res;
  const fs::path dir = sweep_output_dir(sweep);
  fs::create_directories(dir);
  res.table = dir / "sweep_summary.csv";
  std::string text = std::string(kSweepColumns) + "\n";
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const auto& c = cfgs[i];
    spdlog::info("sweep run {}/{}", i + 1, cfgs.size());
    RunResult r = run_experiment(c, opts);
    res.ok = res.ok && r.status == "ok";
    for (const auto& s : r.summary)
      text += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", i, c.model.name, params_label(c),
                          to_string(c.ensemble.kind), c.ensemble.n_qubits, s.quantity, s.region_size, s.value,
                          s.ensemble_std, s.stderr_mean, s.haar_value, s.relative_difference,
                          s.relative_difference_stderr);
    res.runs.push_back(std::move(r));
  }
  std::ofstream(res.table, std::ios::trunc) << text;
  return res;
}

}  // namespace qsre

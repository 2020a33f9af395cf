#include "qsre/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "qsre/errors.hpp"

namespace qsre {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>> kModelParams{
    {"tfim_l", {"J", "hz", "hx"}},
    {"xxz_nnn", {"delta", "nnn"}},
};

void check_keys(const json& j, std::string_view block, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(fmt::format("'{}' must be an object", block));
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(fmt::format("unknown key '{}' in '{}'", key, block));
  }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view block) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad value for '{}.{}': {}", block, key, e.what()));
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

ExperimentConfig profile_defaults(std::string_view profile) {
  ExperimentConfig c;
  if (profile == "desk") {
    c.ensemble.n_qubits = 10;
    c.ensemble.n_realizations = 20;
    c.evolution.t_final = 1000.0;
    c.averaging.window = 50;
  } else if (profile == "paper") {
    c.ensemble.n_qubits = 16;
    c.ensemble.n_realizations = 50;
    c.evolution.t_final = 10000.0;
    c.averaging.window = 100;
    c.measures.sre = false;  // 16 qubits is past the enumeration cap
  } else {
    throw ConfigError(fmt::format("unknown profile '{}'", profile));
  }
  c.profile = std::string(profile);
  return c;
}

void ExperimentConfig::validate() const {
  auto it = kModelParams.find(model.name);
  if (it == kModelParams.end()) throw ConfigError(fmt::format("unknown model '{}'", model.name));
  for (const auto& [k, _] : model.params)
    if (!it->second.count(k)) throw ConfigError(fmt::format("unknown parameter '{}' for {}", k, model.name));
  for (const auto& k : it->second)
    if (!model.params.count(k)) throw ConfigError(fmt::format("missing parameter '{}' for {}", k, model.name));
  const int n = ensemble.n_qubits;
  if (model.name == "tfim_l" && n < 3) throw ConfigError("tfim_l needs N >= 3");
  if (model.name == "xxz_nnn" && n < 5) throw ConfigError("xxz_nnn needs N >= 5");

  try {
    ensemble.validate();
    evolution.krylov().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n > kEntropyQubitCap) throw ResourceError(fmt::format("N = {} exceeds the entropy cap {}", n, kEntropyQubitCap));
  if (measures.sre && n > kSreQubitCap)
    throw ResourceError(fmt::format("N = {} exceeds the SRE cap {}", n, kSreQubitCap));

  if (evolution.save_every < 1) throw ConfigError("save_every must be >= 1");
  int steps = 0;
  try {
    steps = step_count(evolution.t_final, evolution.dt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (steps % evolution.save_every != 0) throw ConfigError("step count must be a multiple of save_every");

  if (measures.alphas.empty()) throw ConfigError("measures.alphas must not be empty");
  for (int a : measures.alphas)
    if (a < 1) throw ConfigError("SRE indices must be >= 1");
  for (int r : measures.region_sizes)
    if (r < 1 || r >= n) throw ConfigError(fmt::format("region size {} outside 1..N-1", r));
  if (measures.sre_schedule != "all" && measures.sre_schedule != "window")
    throw ConfigError("sre_schedule must be 'all' or 'window'");
  if (measures.otoc) {
    const auto& o = *measures.otoc;
    if (o.v_op.size() != 1 || o.w_op.size() != 1) throw ConfigError("OTOC operators are single letters");
    if (o.v_site < 0 || o.v_site >= n || o.w_site < 0 || o.w_site >= n) throw ConfigError("OTOC site out of range");
    try {
      step_count(o.t_final, o.dt);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("otoc: ") + e.what());
    }
  }

  if (averaging.anchor != "end") throw ConfigError("averaging.anchor supports only 'end'");
  if (averaging.window < 1 || averaging.window > saved_samples())
    throw ConfigError(fmt::format("averaging window {} outside 1..{}", averaging.window, saved_samples()));
  if (output.directory.empty()) throw ConfigError("output.directory must be set");
  if (output.checkpoint_every < 0 || output.checkpoint_interval_seconds < 0.0)
    throw ConfigError("checkpoint intervals must be non-negative");
  for (const auto& f : output.formats)
    if (f != "csv" && f != "json") throw ConfigError(fmt::format("unknown output format '{}'", f));
}

int ExperimentConfig::total_steps() const { return step_count(evolution.t_final, evolution.dt); }

int ExperimentConfig::saved_samples() const { return total_steps() / evolution.save_every + 1; }

EnsembleSpec ExperimentConfig::ensemble_spec() const {
  EnsembleSpec s = ensemble;
  s.seed = seed;
  return s;
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  check_keys(j, "config", {"model", "ensemble", "evolution", "measures", "averaging", "output", "seed", "profile"});

  if (j.contains("model")) {
    const json& m = j["model"];
    check_keys(m, "model", {"name", "params"});
    std::string name = c.model.name;
    read(m, "name", name, "model");
    if (name != c.model.name) c.model.params.clear();
    c.model.name = name;
    if (m.contains("params")) {
      check_keys(m["params"], "model.params", {"J", "hz", "hx", "delta", "nnn"});
      for (const auto& [k, v] : m["params"].items()) {
        if (!v.is_number()) throw ConfigError(fmt::format("model.params.{} must be a number", k));
        c.model.params[k] = v.get<double>();
      }
    }
  }
  if (j.contains("ensemble")) {
    const json& e = j["ensemble"];
    check_keys(e, "ensemble", {"kind", "n_qubits", "n_realizations", "layers_per_n_squared", "bloch_uniform"});
    if (e.contains("kind")) {
      try {
        c.ensemble.kind = ensemble_kind_from_string(e["kind"].get<std::string>());
      } catch (const std::exception& ex) {
        throw ConfigError(std::string("ensemble.kind: ") + ex.what());
      }
    }
    read(e, "n_qubits", c.ensemble.n_qubits, "ensemble");
    read(e, "n_realizations", c.ensemble.n_realizations, "ensemble");
    read(e, "layers_per_n_squared", c.ensemble.layers_per_n_squared, "ensemble");
    read(e, "bloch_uniform", c.ensemble.bloch_uniform, "ensemble");
  }
  if (j.contains("evolution")) {
    const json& e = j["evolution"];
    check_keys(e, "evolution", {"dt", "t_final", "save_every", "max_subspace", "rel_tolerance"});
    read(e, "dt", c.evolution.dt, "evolution");
    read(e, "t_final", c.evolution.t_final, "evolution");
    read(e, "save_every", c.evolution.save_every, "evolution");
    read(e, "max_subspace", c.evolution.max_subspace, "evolution");
    read(e, "rel_tolerance", c.evolution.rel_tolerance, "evolution");
  }
  if (j.contains("measures")) {
    const json& m = j["measures"];
    check_keys(m, "measures", {"alphas", "region_sizes", "sre", "sre_schedule", "antiflatness", "otoc"});
    read(m, "alphas", c.measures.alphas, "measures");
    read(m, "region_sizes", c.measures.region_sizes, "measures");
    read(m, "sre", c.measures.sre, "measures");
    read(m, "sre_schedule", c.measures.sre_schedule, "measures");
    read(m, "antiflatness", c.measures.antiflatness, "measures");
    if (m.contains("otoc")) {
      if (m["otoc"].is_null()) {
        c.measures.otoc.reset();
      } else {
        const json& o = m["otoc"];
        check_keys(o, "measures.otoc", {"v_site", "w_site", "v_op", "w_op", "dt", "t_final"});
        OtocConfig oc = c.measures.otoc.value_or(OtocConfig{});
        read(o, "v_site", oc.v_site, "measures.otoc");
        read(o, "w_site", oc.w_site, "measures.otoc");
        read(o, "v_op", oc.v_op, "measures.otoc");
        read(o, "w_op", oc.w_op, "measures.otoc");
        read(o, "dt", oc.dt, "measures.otoc");
        read(o, "t_final", oc.t_final, "measures.otoc");
        c.measures.otoc = oc;
      }
    }
  }
  if (j.contains("averaging")) {
    const json& a = j["averaging"];
    check_keys(a, "averaging", {"window", "anchor"});
    read(a, "window", c.averaging.window, "averaging");
    read(a, "anchor", c.averaging.anchor, "averaging");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"directory", "formats", "checkpoint_every", "checkpoint_interval_seconds"});
    read(o, "directory", c.output.directory, "output");
    read(o, "formats", c.output.formats, "output");
    read(o, "checkpoint_every", c.output.checkpoint_every, "output");
    read(o, "checkpoint_interval_seconds", c.output.checkpoint_interval_seconds, "output");
  }
  read(j, "seed", c.seed, "config");
  read(j, "profile", c.profile, "config");
  return c;
}

ExperimentConfig config_from_json(const json& j) {
  std::string profile = "desk";
  if (j.is_object() && j.contains("profile") && j["profile"].is_string()) profile = j["profile"].get<std::string>();
  return config_from_json(j, profile_defaults(profile));
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"name", c.model.name}, {"params", c.model.params}};
  j["ensemble"] = {{"kind", to_string(c.ensemble.kind)},
                   {"n_qubits", c.ensemble.n_qubits},
                   {"n_realizations", c.ensemble.n_realizations},
                   {"layers_per_n_squared", c.ensemble.layers_per_n_squared},
                   {"bloch_uniform", c.ensemble.bloch_uniform}};
  j["evolution"] = {{"dt", c.evolution.dt},
                    {"t_final", c.evolution.t_final},
                    {"save_every", c.evolution.save_every},
                    {"max_subspace", c.evolution.max_subspace},
                    {"rel_tolerance", c.evolution.rel_tolerance}};
  json m = {{"alphas", c.measures.alphas},
            {"region_sizes", c.measures.region_sizes},
            {"sre", c.measures.sre},
            {"sre_schedule", c.measures.sre_schedule},
            {"antiflatness", c.measures.antiflatness},
            {"otoc", nullptr}};
  if (c.measures.otoc) {
    const auto& o = *c.measures.otoc;
    m["otoc"] = {{"v_site", o.v_site}, {"w_site", o.w_site}, {"v_op", o.v_op},
                 {"w_op", o.w_op},     {"dt", o.dt},         {"t_final", o.t_final}};
  }
  j["measures"] = m;
  j["averaging"] = {{"window", c.averaging.window}, {"anchor", c.averaging.anchor}};
  j["output"] = {{"directory", c.output.directory},
                 {"formats", c.output.formats},
                 {"checkpoint_every", c.output.checkpoint_every},
                 {"checkpoint_interval_seconds", c.output.checkpoint_interval_seconds}};
  j["seed"] = c.seed;
  j["profile"] = c.profile;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::string_view profile) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  std::string prof(profile);
  if (j.is_object() && j.contains("profile") && j["profile"].is_string()) prof = j["profile"].get<std::string>();
  return config_from_json(j, profile_defaults(prof));
}

std::string canonical_form(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string config_hash(const ExperimentConfig& cfg) {
  return fmt::format("{:016x}", fnv1a(to_json(cfg).dump()));
}

PauliSumHamiltonian build_hamiltonian(const ExperimentConfig& cfg) {
  const auto& p = cfg.model.params;
  const int n = cfg.ensemble.n_qubits;
  if (cfg.model.name == "tfim_l") return build_tfim_l(n, p.at("J"), p.at("hz"), p.at("hx"));
  if (cfg.model.name == "xxz_nnn") return build_xxz_nnn(n, p.at("delta"), p.at("nnn"));
  throw ConfigError(fmt::format("unknown model '{}'", cfg.model.name));
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir(cfg.output.directory);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("QSRE_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / dir;
  }
  return dir;
}

}  // namespace qsre

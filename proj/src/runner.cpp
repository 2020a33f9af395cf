#include "qsre/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "qsre/errors.hpp"
#include "qsre/haar_ref.hpp"
#include "qsre/measures.hpp"
#include "qsre/otoc.hpp"
#include "qsre/parallel.hpp"

#ifndef QSRE_GIT_REVISION
#define QSRE_GIT_REVISION "unknown"
#endif

namespace qsre {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Interrupted {
  int step;
};

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_measure_row(const MeasureRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.time, r.realization, r.alpha, r.s1, r.s2, r.s3, r.m,
                     r.m_lin, r.antiflatness, r.log_antiflatness);
}

std::string format_profile_row(const ProfileRow& r) {
  return fmt::format("{},{},{},{},{},{}\n", r.time, r.realization, r.region_size, r.s1, r.s2, r.s3);
}

std::vector<std::vector<std::string>> read_csv_fields(const std::string& text, std::string_view header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(fmt::format("unexpected CSV header '{}'", line));
  std::vector<std::vector<std::string>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    out.push_back(std::move(f));
  }
  return out;
}

double to_d(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::vector<MeasureRow> parse_measures(const std::string& text) {
  std::vector<MeasureRow> rows;
  for (const auto& f : read_csv_fields(text, kMeasuresColumns)) {
    if (f.size() != 10) throw std::runtime_error("measures row has the wrong field count");
    rows.push_back({to_d(f[0]), std::stoi(f[1]), std::stoi(f[2]), to_d(f[3]), to_d(f[4]), to_d(f[5]), to_d(f[6]),
                    to_d(f[7]), to_d(f[8]), to_d(f[9])});
  }
  return rows;
}

std::vector<ProfileRow> parse_profile(const std::string& text) {
  std::vector<ProfileRow> rows;
  for (const auto& f : read_csv_fields(text, kProfileColumns)) {
    if (f.size() != 6) throw std::runtime_error("profile row has the wrong field count");
    rows.push_back({to_d(f[0]), std::stoi(f[1]), std::stoi(f[2]), to_d(f[3]), to_d(f[4]), to_d(f[5])});
  }
  return rows;
}

struct RealizationData {
  std::vector<MeasureRow> rows;
  std::vector<ProfileRow> profile;
};

std::string rows_text(const RealizationData& d) {
  std::string s = std::string(kMeasuresColumns) + "\n";
  for (const auto& r : d.rows) s += format_measure_row(r);
  return s;
}

std::string profile_text(const RealizationData& d) {
  std::string s = std::string(kProfileColumns) + "\n";
  for (const auto& r : d.profile) s += format_profile_row(r);
  return s;
}

fs::path checkpoint_dir(const fs::path& run_dir, int m) { return run_dir / "checkpoints" / fmt::format("m{:04d}", m); }

void write_checkpoint(const fs::path& dir, const StateVector& psi, int step, bool complete, const RealizationData& d) {
  fs::create_directories(dir);
  save_state(psi, dir / "state.bin.tmp");
  fs::rename(dir / "state.bin.tmp", dir / "state.bin");
  write_file_atomic(dir / "rows.csv", rows_text(d));
  write_file_atomic(dir / "profile.csv", profile_text(d));
  // progress last: a checkpoint counts only once its data is on disk
  write_file_atomic(dir / "progress.json", json{{"step", step}, {"complete", complete}}.dump() + "\n");
}

struct Checkpoint {
  int step = 0;
  bool complete = false;
  StateVector state{1};
  RealizationData data;
};

std::optional<Checkpoint> load_checkpoint(const fs::path& dir) {
  if (!fs::exists(dir / "progress.json")) return std::nullopt;
  const json p = json::parse(read_file(dir / "progress.json"));
  Checkpoint c;
  c.step = p.at("step").get<int>();
  c.complete = p.at("complete").get<bool>();
  c.state = load_state(dir / "state.bin");
  c.data.rows = parse_measures(read_file(dir / "rows.csv"));
  c.data.profile = parse_profile(read_file(dir / "profile.csv"));
  return c;
}

void record(const ExperimentConfig& cfg, int m, int sample, double t, const StateVector& psi, RealizationData& d) {
  const int n = cfg.ensemble.n_qubits;
  const PartitionMeasures pm = partition_measures(psi, cfg.half_chain());
  const bool in_window = sample >= cfg.saved_samples() - cfg.averaging.window;
  const bool do_sre = cfg.measures.sre && (cfg.measures.sre_schedule == "all" || in_window);
  for (int a : cfg.measures.alphas) {
    MeasureRow r;
    r.time = t;
    r.realization = m;
    r.alpha = a;
    r.s1 = pm.s1_avg;
    r.s2 = pm.s2_avg;
    r.s3 = pm.s3_avg;
    if (do_sre) {
      const MagicRecord mr = sre_exact(psi, a, std::max(n, kDefaultEnumerationCap));
      r.m = mr.sre;
      r.m_lin = mr.sre_linearized;
    } else {
      r.m = r.m_lin = kNaN;
    }
    r.antiflatness = cfg.measures.antiflatness ? pm.antiflatness_avg : kNaN;
    r.log_antiflatness = cfg.measures.antiflatness ? pm.log_antiflatness_avg : kNaN;
    d.rows.push_back(r);
  }
  for (int reg : cfg.measures.region_sizes) {
    const PartitionMeasures p = reg == cfg.half_chain() ? pm : partition_measures(psi, reg);
    d.profile.push_back({t, m, reg, p.s1_avg, p.s2_avg, p.s3_avg});
  }
}

RealizationData run_realization(const ExperimentConfig& cfg, const PauliSumHamiltonian& h, int m,
                                const fs::path& run_dir, bool resume, const RunOptions& opts) {
  const bool checkpoints = cfg.output.checkpoint_every > 0 || cfg.output.checkpoint_interval_seconds > 0.0 ||
                           static_cast<bool>(opts.interrupt);
  const fs::path cdir = checkpoint_dir(run_dir, m);
  RealizationData data;
  StateVector psi0(1);
  int first_step = 0;

  std::optional<Checkpoint> ck;
  if (resume) ck = load_checkpoint(cdir);
  if (ck) {
    if (ck->complete) return std::move(ck->data);
    data = std::move(ck->data);
    psi0 = std::move(ck->state);
    first_step = ck->step;
    spdlog::info("realization {} resumes at step {}", m, first_step);
  } else {
    psi0 = generate(cfg.ensemble_spec(), m);
  }

  const int save_every = cfg.evolution.save_every;
  const int steps = cfg.total_steps();
  auto last_ck = std::chrono::steady_clock::now();
  const auto observer = [&](int step, double t, const StateVector& psi) {
    if (step == first_step && ck) return;  // already recorded before the checkpoint
    if (step % save_every == 0) record(cfg, m, step / save_every, t, psi, data);
    if (!checkpoints || step == steps) return;
    bool due = cfg.output.checkpoint_every > 0 && step % cfg.output.checkpoint_every == 0;
    if (cfg.output.checkpoint_interval_seconds > 0.0) {
      const auto now = std::chrono::steady_clock::now();
      if (std::chrono::duration<double>(now - last_ck).count() >= cfg.output.checkpoint_interval_seconds) {
        due = true;
        last_ck = now;
      }
    }
    if (!due) return;
    write_checkpoint(cdir, psi, step, false, data);
    if (opts.interrupt && opts.interrupt(m, step)) throw Interrupted{step};
  };
  const EvolutionSummary s = evolve(h, psi0, cfg.evolution.t_final, cfg.evolution.krylov(), observer, first_step);
  if (checkpoints) write_checkpoint(cdir, s.final_state, steps, true, data);
  return data;
}

// Values of one quantity: [realization][saved sample].
struct Series {
  std::string name;
  int region_size;
  std::vector<std::vector<double>> values;
};

double haar_value_for(const std::string& name, int n, int r) {
  if (name == "S1") return page_renyi(n, r, 1);
  if (name == "S2") return page_renyi(n, r, 2);
  if (name == "S3") return page_renyi(n, r, 3);
  if (name == "antiflatness") return haar_antiflatness(n, r);
  if (name == "log_antiflatness") return haar_log_antiflatness(n, r);
  if (name == "M2") return haar_m2(n);
  if (name == "M2_lin") return haar_m2_linear(n);
  return kNaN;
}

std::vector<Series> collect_series(const ExperimentConfig& cfg, const std::vector<MeasureRow>& rows,
                                   const std::vector<ProfileRow>& profile) {
  std::vector<int> reals;
  for (const auto& r : rows) reals.push_back(r.realization);
  std::sort(reals.begin(), reals.end());
  reals.erase(std::unique(reals.begin(), reals.end()), reals.end());
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < reals.size(); ++i) slot[reals[i]] = i;

  const int samples = cfg.saved_samples();
  const double step_time = cfg.evolution.dt * cfg.evolution.save_every;
  const auto sample_of = [&](double t) { return static_cast<int>(std::lround(t / step_time)); };
  const auto blank = [&] {
    return std::vector<std::vector<double>>(reals.size(), std::vector<double>(static_cast<std::size_t>(samples), kNaN));
  };

  const int half = cfg.half_chain();
  std::vector<Series> out;
  for (const char* q : {"S1", "S2", "S3", "antiflatness", "log_antiflatness"}) out.push_back({q, half, blank()});
  std::map<int, std::size_t> alpha_base;
  for (int a : cfg.measures.alphas) {
    alpha_base[a] = out.size();
    out.push_back({fmt::format("M{}", a), half, blank()});
    out.push_back({fmt::format("M{}_lin", a), half, blank()});
  }
  std::map<int, std::size_t> region_base;
  for (int reg : cfg.measures.region_sizes) {
    if (reg == half || region_base.count(reg)) continue;
    region_base[reg] = out.size();
    for (const char* q : {"S1", "S2", "S3"}) out.push_back({q, reg, blank()});
  }

  const int first_alpha = cfg.measures.alphas.front();
  for (const auto& r : rows) {
    const int k = sample_of(r.time);
    if (k < 0 || k >= samples) continue;
    const std::size_t i = slot.at(r.realization);
    const auto ku = static_cast<std::size_t>(k);
    if (r.alpha == first_alpha) {
      out[0].values[i][ku] = r.s1;
      out[1].values[i][ku] = r.s2;
      out[2].values[i][ku] = r.s3;
      out[3].values[i][ku] = r.antiflatness;
      out[4].values[i][ku] = r.log_antiflatness;
    }
    if (auto it = alpha_base.find(r.alpha); it != alpha_base.end()) {
      out[it->second].values[i][ku] = r.m;
      out[it->second + 1].values[i][ku] = r.m_lin;
    }
  }
  for (const auto& p : profile) {
    auto it = region_base.find(p.region_size);
    auto sl = slot.find(p.realization);
    const int k = sample_of(p.time);
    if (it == region_base.end() || sl == slot.end() || k < 0 || k >= samples) continue;
    const auto ku = static_cast<std::size_t>(k);
    out[it->second].values[sl->second][ku] = p.s1;
    out[it->second + 1].values[sl->second][ku] = p.s2;
    out[it->second + 2].values[sl->second][ku] = p.s3;
  }
  return out;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

std::string ensemble_text(const ExperimentConfig& cfg, const std::vector<Series>& series) {
  std::string s = std::string(kEnsembleColumns) + "\n";
  const double step_time = cfg.evolution.dt * cfg.evolution.save_every;
  for (int k = 0; k < cfg.saved_samples(); ++k) {
    for (const auto& q : series) {
      if (q.values.empty()) continue;
      std::vector<double> col;
      for (const auto& real : q.values) col.push_back(real[static_cast<std::size_t>(k)]);
      if (std::any_of(col.begin(), col.end(), [](double x) { return std::isnan(x); })) continue;
      const auto [mean, sd] = mean_std(col);
      s += fmt::format("{},{},{},{},{},{}\n", k * step_time, q.name, q.region_size, mean, sd, col.size());
    }
  }
  return s;
}

std::string summary_text(const std::vector<SummaryRow>& rows) {
  std::string s = std::string(kSummaryColumns) + "\n";
  for (const auto& r : rows)
    s += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.quantity, r.region_size, r.value, r.ensemble_std,
                     r.stderr_mean, r.haar_value, r.relative_difference, r.relative_difference_stderr, r.window,
                     r.realizations);
  return s;
}

json schema_json() {
  const auto split = [](std::string_view cols) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : cols) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  return {{"measures.csv", split(kMeasuresColumns)},
          {"entropy_profile.csv", split(kProfileColumns)},
          {"ensemble.csv", split(kEnsembleColumns)},
          {"summary.csv", split(kSummaryColumns)},
          {"otoc.csv", split("time,ensemble,re_mean,im_mean,re_std,im_std,M")}};
}

RunResult execute(const ExperimentConfig& cfg, const fs::path& dir, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  if (opts.threads > 0) set_threads(opts.threads);
  fs::create_directories(dir);
  if (!opts.resume) fs::remove_all(dir / "checkpoints");
  write_file_atomic(dir / "config.resolved.json", canonical_form(cfg));

  const PauliSumHamiltonian h = build_hamiltonian(cfg);
  const int m_count = cfg.ensemble.n_realizations;
  spdlog::info("run {}: {} {} N={} M={} steps={} threads={}", config_hash(cfg), cfg.model.name,
               to_string(h.regime()), cfg.ensemble.n_qubits, m_count, cfg.total_steps(), max_threads());

  std::vector<RealizationData> data(static_cast<std::size_t>(m_count));
  std::vector<std::string> errors(static_cast<std::size_t>(m_count));
  std::vector<char> interrupted(static_cast<std::size_t>(m_count), 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (int m = 0; m < m_count; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    try {
      data[mu] = run_realization(cfg, h, m, dir, opts.resume, opts);
      spdlog::debug("realization {} done", m);
    } catch (const Interrupted& e) {
      interrupted[mu] = 1;
      spdlog::info("realization {} interrupted at step {}", m, e.step);
    } catch (const std::exception& e) {
      errors[mu] = e.what();
      spdlog::error("realization {} failed: {}", m, e.what());
    }
  }

  RunResult res;
  res.directory = dir;
  std::vector<MeasureRow> rows;
  std::vector<ProfileRow> profile;
  const bool any_interrupt = std::any_of(interrupted.begin(), interrupted.end(), [](char c) { return c != 0; });
  for (int m = 0; m < m_count; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    if (!errors[mu].empty()) {
      res.failures.emplace_back(m, errors[mu]);
      continue;
    }
    if (interrupted[mu]) continue;
    rows.insert(rows.end(), data[mu].rows.begin(), data[mu].rows.end());
    profile.insert(profile.end(), data[mu].profile.begin(), data[mu].profile.end());
  }
  res.status = !res.failures.empty() ? "failed" : any_interrupt ? "interrupted" : "ok";

  // single ordered writer: rows sorted by (time, realization, alpha)
  std::stable_sort(rows.begin(), rows.end(), [](const MeasureRow& a, const MeasureRow& b) {
    return std::tie(a.time, a.realization) < std::tie(b.time, b.realization);
  });
  std::stable_sort(profile.begin(), profile.end(), [](const ProfileRow& a, const ProfileRow& b) {
    return std::tie(a.time, a.realization) < std::tie(b.time, b.realization);
  });

  if (res.status != "interrupted") {
    std::string text = std::string(kMeasuresColumns) + "\n";
    for (const auto& r : rows) text += format_measure_row(r);
    write_file_atomic(dir / "measures.csv", text);
    if (!cfg.measures.region_sizes.empty()) {
      std::string ptext = std::string(kProfileColumns) + "\n";
      for (const auto& r : profile) ptext += format_profile_row(r);
      write_file_atomic(dir / "entropy_profile.csv", ptext);
    }
    if (!rows.empty()) {
      write_file_atomic(dir / "ensemble.csv", ensemble_text(cfg, collect_series(cfg, rows, profile)));
      res.summary = summarize(cfg, rows, profile);
      write_file_atomic(dir / "summary.csv", summary_text(res.summary));
    }
    if (cfg.measures.otoc) {
      const auto& o = *cfg.measures.otoc;
      OtocSpec spec{o.v_site, o.w_site, o.v_op[0], o.w_op[0], uniform_times(o.t_final, o.dt)};
      KrylovConfig kc = cfg.evolution.krylov();
      kc.dt = o.dt;
      try {
        const OtocSeries series = otoc_ensemble(h, cfg.ensemble_spec(), spec, kc);
        std::ostringstream os;
        write_otoc_csv(os, {series});
        write_file_atomic(dir / "otoc.csv", os.str());
      } catch (const std::exception& e) {
        res.failures.emplace_back(-1, std::string("otoc: ") + e.what());
        res.status = "failed";
      }
    }
  }

  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json failures = json::array();
  for (const auto& [m, what] : res.failures) failures.push_back({{"realization", m}, {"error", what}});
  const json manifest = {
      {"schema_version", kOutputSchemaVersion},
      {"config_hash", config_hash(cfg)},
      {"git_revision", QSRE_GIT_REVISION},
      {"wall_time_seconds", res.wall_seconds},
      {"status", res.status},
      {"failures", failures},
      {"model", cfg.model.name},
      {"regime", to_string(h.regime())},
      {"ensemble", to_string(cfg.ensemble.kind)},
      {"n_qubits", cfg.ensemble.n_qubits},
      {"realizations", m_count},
      {"profile", cfg.profile},
      {"long_running", cfg.profile == "paper"},
      {"threads", max_threads()},
      {"units", {{"entropy", "nats"}, {"sre", "bits"}}},
      {"columns", schema_json()},
  };
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  spdlog::info("run finished: {} in {:.1f}s", res.status, res.wall_seconds);
  return res;
}

}  // namespace

std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<MeasureRow>& rows,
                                  const std::vector<ProfileRow>& profile) {
  const auto series = collect_series(cfg, rows, profile);
  const int samples = cfg.saved_samples();
  const int window = cfg.averaging.window;
  const int n = cfg.ensemble.n_qubits;
  std::vector<SummaryRow> out;
  for (const auto& q : series) {
    if (q.values.empty()) continue;
    std::vector<double> per_real;
    bool finite = true;
    for (const auto& real : q.values) {
      double s = 0.0;
      for (int k = samples - window; k < samples; ++k) s += real[static_cast<std::size_t>(k)];
      finite = finite && std::isfinite(s);
      per_real.push_back(s / window);
    }
    if (!finite) continue;
    const auto [mean, sd] = mean_std(per_real);
    SummaryRow r;
    r.quantity = q.name;
    r.region_size = q.region_size;
    r.value = mean;
    r.ensemble_std = sd;
    r.stderr_mean = sd / std::sqrt(static_cast<double>(per_real.size()));
    r.haar_value = haar_value_for(q.name, n, q.region_size);
    if (std::isfinite(r.haar_value) && r.haar_value != 0.0) {
      r.relative_difference = relative_difference(mean, r.haar_value);
      r.relative_difference_stderr = r.stderr_mean / r.haar_value;
    } else {
      r.relative_difference = r.relative_difference_stderr = kNaN;
    }
    r.window = window;
    r.realizations = static_cast<int>(per_real.size());
    out.push_back(r);
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  return execute(cfg, resolve_output_dir(cfg), opts);
}

RunResult resume_experiment(const fs::path& dir, RunOptions opts) {
  const json j = json::parse(read_file(dir / "config.resolved.json"));
  const ExperimentConfig cfg = config_from_json(j);
  opts.resume = true;
  return execute(cfg, dir, opts);
}

std::string describe_plan(const ExperimentConfig& cfg) {
  cfg.validate();
  const PauliSumHamiltonian h = build_hamiltonian(cfg);
  std::string s;
  s += fmt::format("config hash     {}\n", config_hash(cfg));
  s += fmt::format("profile         {}{}\n", cfg.profile, cfg.profile == "paper" ? " (long running)" : "");
  s += fmt::format("model           {} {} ({} terms)\n", cfg.model.name, to_string(h.regime()), h.terms().size());
  s += fmt::format("ensemble        {} N={} M={} seed={}\n", to_string(cfg.ensemble.kind), cfg.ensemble.n_qubits,
                   cfg.ensemble.n_realizations, cfg.seed);
  s += fmt::format("evolution       dt={} t_final={} steps={} saved={}\n", cfg.evolution.dt, cfg.evolution.t_final,
                   cfg.total_steps(), cfg.saved_samples());
  s += fmt::format("averaging       last {} samples\n", cfg.averaging.window);
  s += fmt::format("measures        half-chain R={} sre={} ({}) alphas=[{}] profile=[{}]\n", cfg.half_chain(),
                   cfg.measures.sre, cfg.measures.sre_schedule, fmt::join(cfg.measures.alphas, ","),
                   fmt::join(cfg.measures.region_sizes, ","));
  if (cfg.measures.otoc)
    s += fmt::format("otoc            {}_{} {}_{} t_final={} dt={}\n", cfg.measures.otoc->v_op,
                     cfg.measures.otoc->v_site, cfg.measures.otoc->w_op, cfg.measures.otoc->w_site,
                     cfg.measures.otoc->t_final, cfg.measures.otoc->dt);
  s += fmt::format("output          {}\n", resolve_output_dir(cfg).string());
  return s;
}

std::vector<MeasureRow> read_measures_csv(const fs::path& path) { return parse_measures(read_file(path)); }

std::vector<SummaryRow> read_summary_csv(const fs::path& path) {
  std::vector<SummaryRow> rows;
  for (const auto& f : read_csv_fields(read_file(path), kSummaryColumns)) {
    if (f.size() != 10) throw std::runtime_error("summary row has the wrong field count");
    rows.push_back({f[0], std::stoi(f[1]), to_d(f[2]), to_d(f[3]), to_d(f[4]), to_d(f[5]), to_d(f[6]), to_d(f[7]),
                    std::stoi(f[8]), std::stoi(f[9])});
  }
  return rows;
}

}  // namespace qsre

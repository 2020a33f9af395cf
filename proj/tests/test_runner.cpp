#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qsre/errors.hpp"
#include "qsre/parallel.hpp"
#include "qsre/runner.hpp"
#include "qsre/sweep.hpp"

using namespace qsre;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qsre_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const fs::path& dir) {
  auto c = profile_defaults("desk");
  c.ensemble.n_qubits = 6;
  c.ensemble.n_realizations = 3;
  c.ensemble.kind = EnsembleKind::FR;
  c.evolution.dt = 0.5;
  c.evolution.t_final = 5.0;
  c.averaging.window = 4;
  c.measures.alphas = {2, 3};
  c.measures.region_sizes = {1, 2, 3};
  c.output.directory = dir.string();
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("run writes every file with the versioned columns") {
  const auto dir = scratch("layout");
  const auto res = run_experiment(small_config(dir));
  CHECK(res.status == "ok");
  for (const char* f : {"config.resolved.json", "measures.csv", "entropy_profile.csv", "ensemble.csv", "summary.csv",
                        "manifest.json"})
    CHECK(fs::exists(dir / f));
  const auto measures = slurp(dir / "measures.csv");
  CHECK(measures.rfind(
            "time,realization,alpha,S1_avg,S2_avg,S3_avg,M2,M2_lin,antiflatness_halfchain,"
            "log_antiflatness_halfchain\n",
            0) == 0);
  const auto rows = read_measures_csv(dir / "measures.csv");
  CHECK(rows.size() == 11 * 3 * 2);

  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["schema_version"] == kOutputSchemaVersion);
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["config_hash"] == config_hash(small_config(dir)));
  CHECK(manifest["columns"]["measures.csv"].size() == 10);
  CHECK(manifest.contains("git_revision"));
  CHECK(manifest.contains("wall_time_seconds"));

  // resolved config reloads to the same canonical text
  const auto resolved = slurp(dir / "config.resolved.json");
  CHECK(canonical_form(config_from_json(json::parse(resolved))) == resolved);

  const auto summary = read_summary_csv(dir / "summary.csv");
  bool saw_s1 = false;
  for (const auto& r : summary) {
    if (r.quantity == "S1" && r.region_size == 3) {
      saw_s1 = true;
      CHECK(r.haar_value == doctest::Approx(3 * std::log(2.0) - 0.5));
      CHECK(r.relative_difference == doctest::Approx(std::abs(r.value - r.haar_value) / r.haar_value));
      CHECK(r.realizations == 3);
      CHECK(r.window == 4);
    }
  }
  CHECK(saw_s1);
}

TEST_CASE("t = 0 rows reflect the product initial state") {
  const auto dir = scratch("t0");
  run_experiment(small_config(dir));
  for (const auto& r : read_measures_csv(dir / "measures.csv")) {
    if (r.time != 0.0) continue;
    CHECK(std::abs(r.s1) < 1e-10);
    CHECK(std::abs(r.antiflatness) < 1e-10);
    CHECK(r.m > 0.0);  // FR states carry local magic
  }
}

TEST_CASE("summary matches a hand computation from the measures rows") {
  const auto dir = scratch("summary");
  const auto cfg = small_config(dir);
  const auto res = run_experiment(cfg);
  const auto rows = read_measures_csv(dir / "measures.csv");
  // window = last 4 saved samples: times 3.5, 4, 4.5, 5
  std::vector<double> per_real(3, 0.0);
  for (const auto& r : rows)
    if (r.alpha == 2 && r.time >= 3.5) per_real[static_cast<std::size_t>(r.realization)] += r.m / 4;
  const double mean = (per_real[0] + per_real[1] + per_real[2]) / 3;
  for (const auto& s : res.summary)
    if (s.quantity == "M2") CHECK(s.value == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("outputs are byte-identical for any thread count") {
  const int saved = max_threads();
  const auto d1 = scratch("thr1"), d4 = scratch("thr4");
  RunOptions o1, o4;
  o1.threads = 1;
  o4.threads = 4;
  run_experiment(small_config(d1), o1);
  run_experiment(small_config(d4), o4);
  set_threads(saved);
  for (const char* f : {"measures.csv", "entropy_profile.csv", "ensemble.csv", "summary.csv"})
    CHECK(slurp(d1 / f) == slurp(d4 / f));
}

TEST_CASE("interrupt and resume reproduce the uninterrupted run") {
  const auto full = scratch("full"), part = scratch("part");
  auto cfg = small_config(full);
  cfg.output.checkpoint_every = 2;
  run_experiment(cfg);

  cfg.output.directory = part.string();
  RunOptions stop;
  stop.interrupt = [](int m, int step) { return m == 1 && step == 4; };
  const auto r1 = run_experiment(cfg, stop);
  CHECK(r1.status == "interrupted");
  CHECK(json::parse(slurp(part / "manifest.json"))["status"] == "interrupted");
  CHECK(fs::exists(part / "checkpoints" / "m0001" / "state.bin"));

  const auto r2 = resume_experiment(part);
  CHECK(r2.status == "ok");
  const auto a = read_measures_csv(full / "measures.csv");
  const auto b = read_measures_csv(part / "measures.csv");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].time == b[i].time);
    CHECK(std::abs(a[i].s1 - b[i].s1) <= 1e-12);
    CHECK(std::abs(a[i].m - b[i].m) <= 1e-12);
    CHECK(std::abs(a[i].log_antiflatness - b[i].log_antiflatness) <= 1e-12);
  }
  CHECK(slurp(full / "summary.csv") == slurp(part / "summary.csv"));
}

TEST_CASE("a failing realization is reported and the rest are kept") {
  const auto dir = scratch("fail");
  auto cfg = small_config(dir);
  cfg.output.checkpoint_every = 5;
  RunOptions opts;
  opts.interrupt = [](int m, int) -> bool {
    if (m == 2) throw NumericError("injected");
    return false;
  };
  const auto res = run_experiment(cfg, opts);
  CHECK(res.status == "failed");
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].first == 2);
  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["failures"][0]["realization"] == 2);
  for (const auto& r : read_measures_csv(dir / "measures.csv")) CHECK(r.realization != 2);
  for (const auto& s : res.summary) CHECK(s.realizations == 2);
}

TEST_CASE("SRE only inside the window when requested") {
  const auto dir = scratch("window");
  auto cfg = small_config(dir);
  cfg.measures.sre_schedule = "window";
  run_experiment(cfg);
  for (const auto& r : read_measures_csv(dir / "measures.csv")) CHECK(std::isnan(r.m) == (r.time < 3.5));
}

TEST_CASE("dry-run plan and OTOC output") {
  const auto dir = scratch("otoc");
  auto cfg = small_config(dir);
  cfg.measures.otoc = OtocConfig{0, 0, "Z", "Z", 0.5, 1.0};
  const auto plan = describe_plan(cfg);
  CHECK(plan.find("config hash") != std::string::npos);
  CHECK_FALSE(fs::exists(dir));
  run_experiment(cfg);
  const auto text = slurp(dir / "otoc.csv");
  CHECK(text.rfind("time,ensemble,re_mean,im_mean,re_std,im_std,M\n0,FR,1,", 0) == 0);
}

TEST_CASE("sweep: grid expansion, alignment and summary table") {
  const auto dir = scratch("sweep");
  json base = to_json(small_config(dir / "ignored"));
  base["evolution"]["t_final"] = 2.0;
  base["averaging"]["window"] = 2;
  json sweep = {{"base", base},
                {"grid", {{"model.params.hx", {0.0, 0.5}}, {"ensemble.n_qubits", {5, 6}}}},
                {"output", {{"directory", dir.string()}}}};
  const auto cfgs = expand_sweep(sweep);
  REQUIRE(cfgs.size() == 4);
  // sorted keys, the last one varying fastest
  CHECK(cfgs[1].ensemble.n_qubits == 5);
  CHECK(cfgs[1].model.params.at("hx") == 0.5);
  CHECK(cfgs[2].ensemble.n_qubits == 6);
  CHECK(cfgs[2].model.params.at("hx") == 0.0);
  CHECK(cfgs[3].output.directory == (dir / "run_003").string());

  const auto res = run_sweep(sweep);
  CHECK(res.ok);
  const auto table = slurp(res.table);
  CHECK(table.rfind(std::string(kSweepColumns) + "\n", 0) == 0);
  CHECK(table.find("tfim_l,J=1;hx=0.5;hz=1.5,FR,6,S1,3,") != std::string::npos);

  json mis = {{"configs", {base, base}}};
  mis["configs"][1]["measures"]["alphas"] = {2};
  CHECK_THROWS_AS(expand_sweep(mis), ConfigError);

  const auto empty_dir = scratch("sweep_empty");
  json empty = {{"configs", json::array()}, {"output", {{"directory", empty_dir.string()}}}};
  const auto er = run_sweep(empty);
  CHECK(er.ok);
  CHECK(slurp(er.table) == std::string(kSweepColumns) + "\n");
  json empty_axis = {{"base", base}, {"grid", {{"model.params.hx", json::array()}}}};
  CHECK(expand_sweep(empty_axis).empty());
}

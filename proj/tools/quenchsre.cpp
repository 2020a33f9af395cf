// quenchsre: command line front end for quench experiments.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "qsre/config.hpp"
#include "qsre/errors.hpp"
#include "qsre/haar_ref.hpp"
#include "qsre/parallel.hpp"
#include "qsre/runner.hpp"
#include "qsre/sweep.hpp"

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kRunFailed = 1;
constexpr int kBadConfig = 2;
constexpr int kResource = 3;

int print_baselines(int n) {
  std::cout << "region_size,f,S1,S2,S3,antiflatness,log_antiflatness\n";
  for (int r = 1; r < n; ++r) {
    const auto b = qsre::haar_baseline(n, r);
    std::cout << fmt::format("{},{},{},{},{},{},{}\n", r, static_cast<double>(r) / n, b.s_alpha.at(1),
                             b.s_alpha.at(2), b.s_alpha.at(3), b.antiflatness, b.log_antiflatness);
  }
  std::cout << fmt::format("# M2 {} (bits), M2_lin {}, large-N M2 {}\n", qsre::haar_m2(n), qsre::haar_m2_linear(n),
                           qsre::haar_m2_limit(n));
  const auto ratio = qsre::haar_log_antiflatness_argument();
  std::cout << fmt::format("# half-chain exp(F) = {}/{}\n", ratio.num, ratio.den);
  return kOk;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qsre::ConfigError(fmt::format("cannot open '{}'", path));
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw qsre::ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement, magic and anti-flatness after global quenches"};
  app.require_subcommand(1);

  std::string profile = "desk";
  int threads = 0;
  bool verbose = false;
  app.add_option("--profile", profile, "Default profile")->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string config_path;
  std::string resume_dir;
  bool dry_run = false;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config_path, "Config file (JSON)");
  run->add_option("--resume", resume_dir, "Continue an interrupted run from its directory");
  run->add_flag("--dry-run", dry_run, "Validate and print the plan only");

  std::string sweep_path;
  bool sweep_dry = false;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("config", sweep_path, "Sweep file (JSON)")->required();
  sweep->add_flag("--dry-run", sweep_dry, "Expand and validate only");

  int n_base = 0;
  auto* baselines = app.add_subcommand("baselines", "Print Haar baselines");
  baselines->add_option("--n", n_base, "Number of qubits")->required()->check(CLI::Range(2, 62));

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print its canonical form");
  validate->add_option("config", validate_path, "Config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  if (threads > 0) qsre::set_threads(threads);

  try {
    if (*baselines) return print_baselines(n_base);

    if (*validate) {
      const auto cfg = qsre::load_config(validate_path, profile);
      cfg.validate();
      std::cout << qsre::canonical_form(cfg);
      return kOk;
    }

    if (*run) {
      qsre::RunOptions opts;
      opts.threads = threads;
      qsre::RunResult res;
      if (!resume_dir.empty()) {
        res = qsre::resume_experiment(resume_dir, opts);
      } else {
        if (config_path.empty()) throw qsre::ConfigError("run needs a config file or --resume <dir>");
        const auto cfg = qsre::load_config(config_path, profile);
        if (dry_run) {
          std::cout << qsre::describe_plan(cfg);
          return kOk;
        }
        res = qsre::run_experiment(cfg, opts);
      }
      std::cout << fmt::format("{} {}\n", res.status, res.directory.string());
      for (const auto& [m, what] : res.failures) std::cerr << fmt::format("realization {}: {}\n", m, what);
      return res.status == "ok" ? kOk : kRunFailed;
    }

    if (*sweep) {
      const auto j = read_json(sweep_path);
      if (sweep_dry) {
        const auto cfgs = qsre::expand_sweep(j, profile);
        for (const auto& c : cfgs) std::cout << qsre::describe_plan(c) << "\n";
        std::cout << fmt::format("{} runs\n", cfgs.size());
        return kOk;
      }
      qsre::RunOptions opts;
      opts.threads = threads;
      const auto res = qsre::run_sweep(j, profile, opts);
      std::cout << res.table.string() << "\n";
      return res.ok ? kOk : kRunFailed;
    }
  } catch (const qsre::ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kBadConfig;
  } catch (const qsre::ResourceError& e) {
    spdlog::error("resource: {}", e.what());
    return kResource;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRunFailed;
  }
  return kOk;
}

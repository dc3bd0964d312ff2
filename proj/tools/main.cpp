// trustsim command-line front end: run | batch | validate | plot.
//
// Exit codes, shared by every command:
//   0  success
//   1  config validation failure (violations printed one per line) or a
//      rejected precondition such as duplicate batch seeds
//   2  I/O or structural failure (unreadable/malformed files, unwritable
//      output, missing artifacts)

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "trustsim/artifacts.hpp"
#include "trustsim/config_io.hpp"
#include "trustsim/engine.hpp"
#include "trustsim/plots.hpp"

namespace {

using trustsim::ScenarioConfig;
using trustsim::Violation;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

std::string fixed9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

// Loads a config, mapping structural problems to exit code 2 semantics by
// returning nullopt after printing the reason.
std::optional<ScenarioConfig> load_or_report(const std::string& path) {
  try {
    return trustsim::load_config(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

int report_violations(const std::vector<Violation>& violations, std::ostream& out) {
  for (const Violation& v : violations) out << v.path << ": " << v.message << "\n";
  return violations.empty() ? kExitOk : kExitInvalid;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, bool timestamps) {
  auto cfg = load_or_report(config_path);
  if (!cfg) return kExitIo;
  if (seed) cfg->seed = *seed;
  const std::vector<Violation> violations = trustsim::validate_config(*cfg);
  if (!violations.empty()) return report_violations(violations, std::cerr);
  try {
    const trustsim::RunArtifacts artifacts = trustsim::run_simulation(*cfg);
    const auto written = trustsim::write_run_artifacts(artifacts, out_dir, timestamps);
    std::cout << "wrote " << written.size() << " artifacts to " << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  auto cfg = load_or_report(config_path);
  if (!cfg) return kExitIo;
  const std::vector<Violation> violations = trustsim::validate_config(*cfg);
  if (violations.empty()) {
    std::cout << "configuration valid\n";
    return kExitOk;
  }
  return report_violations(violations, std::cout);
}

int cmd_plot(const std::string& run_dir) {
  try {
    const auto written = trustsim::emit_plots(run_dir);
    std::cout << "wrote " << written.size() << " plots to " << run_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

bool parse_seeds(const std::string& spec, std::vector<std::uint64_t>& seeds) {
  try {
    const auto range_pos = spec.find("..");
    if (range_pos != std::string::npos) {
      const std::uint64_t lo = std::stoull(spec.substr(0, range_pos));
      const std::uint64_t hi = std::stoull(spec.substr(range_pos + 2));
      if (hi < lo) return false;
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      return !seeds.empty();
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const std::string tok =
          spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (tok.empty()) return false;
      seeds.push_back(std::stoull(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return !seeds.empty();
  } catch (const std::exception&) {
    return false;
  }
}

int cmd_batch(const std::string& config_path, const std::string& seeds_spec,
              unsigned parallelism, const std::string& out_dir, bool timestamps) {
  std::vector<std::uint64_t> seeds;
  if (!parse_seeds(seeds_spec, seeds)) {
    std::cerr << "error: cannot parse --seeds \"" << seeds_spec
              << "\" (expected e.g. \"1,2,5\" or \"1..10\")\n";
    return kExitInvalid;
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = i + 1; j < seeds.size(); ++j) {
      if (seeds[i] == seeds[j]) {
        std::cerr << "error: duplicate seed " << seeds[i] << "\n";
        return kExitInvalid;
      }
    }
  }
  auto base = load_or_report(config_path);
  if (!base) return kExitIo;
  const std::vector<Violation> violations = trustsim::validate_config(*base);
  if (!violations.empty()) return report_violations(violations, std::cerr);

  struct SeedResult {
    bool ok = false;
    std::string error;
    double final_opinion = 0.0;
    double final_trust = 0.0;
  };
  std::vector<SeedResult> results(seeds.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= seeds.size()) break;
      ScenarioConfig cfg = *base;
      cfg.seed = seeds[i];
      try {
        const trustsim::RunArtifacts artifacts = trustsim::run_simulation(cfg);
        const auto dir =
            std::filesystem::path(out_dir) / ("seed_" + std::to_string(seeds[i]));
        trustsim::write_run_artifacts(artifacts, dir, timestamps);
        const trustsim::MetricsRow& last = artifacts.log.rows.back();
        results[i] = {true, "", last.avg_opinion, last.avg_trust};
      } catch (const std::exception& e) {
        results[i] = {false, e.what(), 0.0, 0.0};
      }
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(seeds.size())));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  bool any_failed = false;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!results[i].ok) {
      any_failed = true;
      std::cerr << "seed " << seeds[i] << " failed: " << results[i].error << "\n";
    }
  }
  try {
    std::filesystem::create_directories(out_dir);
    const auto summary_path = std::filesystem::path(out_dir) / "summary.csv";
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write " + summary_path.string());
    summary << "seed,final_avg_opinion,final_avg_trust\n";
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!results[i].ok) continue;
      summary << seeds[i] << ',' << fixed9(results[i].final_opinion) << ','
              << fixed9(results[i].final_trust) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (any_failed) return kExitIo;
  std::cout << "completed " << seeds.size() << " runs in " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trustsim: deterministic agent-based trust dynamics simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, seeds_spec;
  std::optional<std::uint64_t> seed;
  unsigned parallelism = 1;
  bool timestamps = false;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and write its artifact set");
  run->add_option("--config", config_path, "Scenario config JSON")->required();
  run->add_option("--seed", seed, "Seed override (takes precedence over the config seed)");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--timestamps", timestamps, "Record a wall-clock timestamp in the manifest");

  CLI::App* batch = app.add_subcommand("batch", "Run one scenario across many seeds");
  batch->add_option("--config", config_path, "Scenario config JSON")->required();
  batch->add_option("--seeds", seeds_spec, "Seed list \"1,2,5\" or range \"1..10\"")->required();
  batch->add_option("--parallelism", parallelism, "Concurrent runs (default 1)");
  batch->add_option("--out", out_dir, "Output directory (per-seed subdirectories)")->required();
  batch->add_flag("--timestamps", timestamps, "Record wall-clock timestamps in manifests");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("--config", config_path, "Scenario config JSON")->required();

  CLI::App* plot = app.add_subcommand("plot", "Render figure SVGs for a run directory");
  plot->add_option("--run", run_dir, "Run directory containing run_manifest.json")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, seed, out_dir, timestamps);
  if (batch->parsed()) return cmd_batch(config_path, seeds_spec, parallelism, out_dir, timestamps);
  if (validate->parsed()) return cmd_validate(config_path);
  return cmd_plot(run_dir);
}

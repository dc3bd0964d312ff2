#include "trustsim/artifacts.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "trustsim/config_io.hpp"

namespace trustsim {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

}  // namespace

std::vector<std::filesystem::path> write_run_artifacts(const RunArtifacts& artifacts,
                                                       const std::filesystem::path& dir,
                                                       bool include_timestamp) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());

  const SimulationState& fin = artifacts.final_state;
  std::vector<double> reputations;
  reputations.reserve(fin.agents.size());
  for (const AgentState& a : fin.agents) reputations.push_back(a.reputation);

  std::vector<std::filesystem::path> written;
  nlohmann::ordered_json manifest_files = nlohmann::ordered_json::array();
  auto add_entry = [&](const std::filesystem::path& path, nlohmann::ordered_json meta) {
    meta["hash_fnv1a64"] = hash_file(path);
    manifest_files.push_back(std::move(meta));
    written.push_back(path);
  };

  {
    const auto path = dir / "timeseries.csv";
    write_timeseries(artifacts.log, path);
    nlohmann::ordered_json meta;
    meta["file"] = "timeseries.csv";
    meta["kind"] = "timeseries";
    meta["rows"] = "one per iteration, 0-based";
    add_entry(path, std::move(meta));
  }
  for (const LabeledMatrix& snap : artifacts.log.trust_snapshots) {
    const std::string name = "trust_snapshot_" + std::to_string(snap.iteration) + ".csv";
    const auto path = dir / name;
    write_matrix_snapshot(snap.values, path);
    nlohmann::ordered_json meta;
    meta["file"] = name;
    meta["kind"] = "trust_snapshot";
    meta["iteration"] = snap.iteration;
    meta["rows"] = "trusting agent i";
    meta["columns"] = "trusted agent j";
    add_entry(path, std::move(meta));
  }
  for (const LabeledMatrix& snap : artifacts.log.allocation_snapshots) {
    const std::string name = "allocation_" + std::to_string(snap.iteration) + ".csv";
    const auto path = dir / name;
    write_matrix_snapshot(snap.values, path);
    nlohmann::ordered_json meta;
    meta["file"] = name;
    meta["kind"] = "allocation";
    meta["iteration"] = snap.iteration;
    meta["rows"] = "affected area";
    meta["columns"] = "agent";
    add_entry(path, std::move(meta));
  }
  {
    const auto path = dir / "friendship.json";
    write_network(fin.graph, reputations, path);
    nlohmann::ordered_json meta;
    meta["file"] = "friendship.json";
    meta["kind"] = "friendship_network";
    add_entry(path, std::move(meta));
  }
  {
    const auto path = dir / "influence.json";
    write_network(influence_network(fin.trust), reputations, path);
    nlohmann::ordered_json meta;
    meta["file"] = "influence.json";
    meta["kind"] = "influence_network";
    add_entry(path, std::move(meta));
  }

  nlohmann::ordered_json manifest;
  manifest["format_version"] = 1;
  manifest["seed"] = fin.config.seed;
  manifest["config"] = config_to_json(fin.config);
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const EventSpec& ev : fin.config.events) {
    nlohmann::ordered_json rec;
    rec["iteration"] = ev.iteration;
    rec["kind"] = std::string(event_kind_name(ev));
    rec["label"] = ev.label;
    events.push_back(std::move(rec));
  }
  manifest["events"] = std::move(events);
  manifest["artifacts"] = std::move(manifest_files);
  if (include_timestamp) manifest["generated_at"] = utc_timestamp();

  const auto manifest_path = dir / "run_manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + manifest_path.string());
  written.push_back(manifest_path);
  return written;
}

}  // namespace trustsim

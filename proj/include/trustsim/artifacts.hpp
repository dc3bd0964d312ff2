#pragma once

#include <filesystem>
#include <vector>

#include "trustsim/engine.hpp"

namespace trustsim {

/// Writes the complete artifact set for one run under `dir` (created if
/// needed): timeseries.csv, trust_snapshot_<iter>.csv / allocation_<iter>.csv
/// per captured snapshot, friendship.json, influence.json, and finally
/// run_manifest.json carrying the config echo, effective seed, event
/// annotations, per-file semantics and FNV-1a64 content hashes. The manifest
/// records a wall-clock timestamp only when `include_timestamp` is set, so
/// default output is byte-reproducible. Returns the written paths, manifest
/// last.
std::vector<std::filesystem::path> write_run_artifacts(const RunArtifacts& artifacts,
                                                       const std::filesystem::path& dir,
                                                       bool include_timestamp = false);

}  // namespace trustsim

#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "trustsim/core.hpp"
#include "trustsim/network.hpp"

namespace trustsim {

struct SimulationState;

/// Per-iteration aggregates behind the timeseries export. Emotion averages
/// are indexed by EmotionChannel.
struct MetricsRow {
  long iteration = 0;
  double avg_opinion = 0.0;
  double avg_trust = 0.0;  // off-diagonal mean; 1.0 for the degenerate n = 1
  std::array<double, kEmotionCount> avg_emotions{};
};

/// A matrix snapshot captured at a scheduled iteration.
struct LabeledMatrix {
  long iteration = 0;
  Eigen::MatrixXd values;
};

struct MetricsLog {
  std::vector<MetricsRow> rows;  // contiguous from iteration 0
  std::vector<LabeledMatrix> trust_snapshots;
  /// n_areas x n_agents grids; column j sums to agent j's budget.
  std::vector<LabeledMatrix> allocation_snapshots;
};

MetricsRow compute_metrics(const SimulationState& state);

/// Header exactly:
/// iteration,avg_opinion,avg_trust,avg_joy,avg_trust_e,avg_fear,avg_surprise,
/// avg_sadness,avg_disgust,avg_anger,avg_anticipation
/// Values carry 9 decimal digits; LF line endings.
void write_timeseries(const MetricsLog& log, const std::filesystem::path& path);

/// Plain numeric CSV, row-major, 9 decimal digits. Row/column semantics are
/// documented in the run manifest, not in the file.
void write_matrix_snapshot(const Eigen::MatrixXd& grid, const std::filesystem::path& path);

/// Node-link JSON: {"nodes": [{id, reputation}], "links": [{source, target,
/// weight}]}, nodes ascending by id, links lexicographic by (source, target).
/// Friendship links carry weight 1.0.
void write_network(const Graph& graph, const std::vector<double>& reputations,
                   const std::filesystem::path& path);
void write_network(const InfluenceNetwork& net, const std::vector<double>& reputations,
                   const std::filesystem::path& path);

/// Parsing helpers shared by the plot emitter and tests.
MetricsLog read_timeseries(const std::filesystem::path& path);
Eigen::MatrixXd read_matrix_snapshot(const std::filesystem::path& path);

/// FNV-1a64 of a file's bytes, hex-encoded; the manifest's content hash.
std::string hash_file(const std::filesystem::path& path);

}  // namespace trustsim

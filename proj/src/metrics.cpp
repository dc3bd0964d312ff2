#include "trustsim/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trustsim/engine.hpp"
#include "trustsim/rng.hpp"

namespace trustsim {

namespace {

constexpr char kTimeseriesHeader[] =
    "iteration,avg_opinion,avg_trust,avg_joy,avg_trust_e,avg_fear,avg_surprise,"
    "avg_sadness,avg_disgust,avg_anger,avg_anticipation";

std::string fixed9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

MetricsRow compute_metrics(const SimulationState& state) {
  MetricsRow row;
  row.iteration = state.iteration;
  const auto n = static_cast<int>(state.agents.size());
  double opinion_sum = 0.0;
  std::array<double, kEmotionCount> emotion_sums{};
  for (const AgentState& a : state.agents) {
    opinion_sum += a.opinion;
    for (int k = 0; k < kEmotionCount; ++k) emotion_sums[static_cast<std::size_t>(k)] += a.emotions[k];
  }
  row.avg_opinion = n > 0 ? opinion_sum / n : 0.0;
  for (int k = 0; k < kEmotionCount; ++k) {
    row.avg_emotions[static_cast<std::size_t>(k)] = n > 0 ? emotion_sums[static_cast<std::size_t>(k)] / n : 0.0;
  }
  if (n <= 1) {
    row.avg_trust = 1.0;  // no off-diagonal entries; mirrors compute_reputation
  } else {
    double trust_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) trust_sum += state.trust(i, j);
      }
    }
    row.avg_trust = trust_sum / (static_cast<double>(n) * (n - 1));
  }
  return row;
}

void write_timeseries(const MetricsLog& log, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << kTimeseriesHeader << '\n';
  for (const MetricsRow& row : log.rows) {
    out << row.iteration << ',' << fixed9(row.avg_opinion) << ',' << fixed9(row.avg_trust);
    for (int k = 0; k < kEmotionCount; ++k) {
      out << ',' << fixed9(row.avg_emotions[static_cast<std::size_t>(k)]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_matrix_snapshot(const Eigen::MatrixXd& grid, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      if (c > 0) out << ',';
      out << fixed9(grid(r, c));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

void write_node_link(int n, const std::vector<WeightedLink>& links,
                     const std::vector<double>& reputations,
                     const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::ordered_json node;
    node["id"] = i;
    node["reputation"] = reputations[static_cast<std::size_t>(i)];
    doc["nodes"].push_back(std::move(node));
  }
  doc["links"] = nlohmann::ordered_json::array();
  for (const WeightedLink& link : links) {
    nlohmann::ordered_json rec;
    rec["source"] = link.source;
    rec["target"] = link.target;
    rec["weight"] = link.weight;
    doc["links"].push_back(std::move(rec));
  }
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_network(const Graph& graph, const std::vector<double>& reputations,
                   const std::filesystem::path& path) {
  std::vector<WeightedLink> links;
  links.reserve(graph.edges.size());
  for (auto [a, b] : graph.edges) links.push_back({a, b, 1.0});
  write_node_link(graph.n, links, reputations, path);
}

void write_network(const InfluenceNetwork& net, const std::vector<double>& reputations,
                   const std::filesystem::path& path) {
  write_node_link(net.n, net.links, reputations, path);
}

MetricsLog read_timeseries(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty timeseries file " + path.string());
  if (line != kTimeseriesHeader) {
    throw std::runtime_error("unexpected timeseries header in " + path.string());
  }
  MetricsLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 3 + kEmotionCount) {
      throw std::runtime_error("malformed timeseries row in " + path.string());
    }
    MetricsRow row;
    row.iteration = std::stol(fields[0]);
    row.avg_opinion = std::stod(fields[1]);
    row.avg_trust = std::stod(fields[2]);
    for (int k = 0; k < kEmotionCount; ++k) {
      row.avg_emotions[static_cast<std::size_t>(k)] = std::stod(fields[static_cast<std::size_t>(3 + k)]);
    }
    log.rows.push_back(row);
  }
  return log;
}

Eigen::MatrixXd read_matrix_snapshot(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) row.push_back(std::stod(f));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged matrix snapshot in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd grid(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows.front().size(); ++c) {
      grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return grid;
}

std::string hash_file(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  const std::uint64_t h = fnv1a64(bytes);
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace trustsim

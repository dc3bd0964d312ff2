#include "trustsim/plots.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "trustsim/core.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/network.hpp"

namespace trustsim {

namespace {

// ---------------------------------------------------------------------------
// Small formatting helpers. All numeric output is fixed-precision so the
// files are byte-stable.
// ---------------------------------------------------------------------------

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Rgb {
  int r = 0, g = 0, b = 0;
};

// Three-stop viridis-like ramp, t in [0,1].
Rgb ramp(double t) {
  static constexpr Rgb stops[3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
  t = clamp01(t);
  const double s = t * 2.0;
  const int k = s < 1.0 ? 0 : 1;
  const double f = s - k;
  auto lerp = [f](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
  return {lerp(stops[k].r, stops[k + 1].r), lerp(stops[k].g, stops[k + 1].g),
          lerp(stops[k].b, stops[k + 1].b)};
}

std::string rgb(const Rgb& c) {
  return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) +
         ")";
}

constexpr const char* kSeriesColors[kEmotionCount] = {
    "#e6b400",  // joy
    "#2ca02c",  // trust_e
    "#9467bd",  // fear
    "#17becf",  // surprise
    "#1f77b4",  // sadness
    "#8c564b",  // disgust
    "#d62728",  // anger
    "#ff7f0e",  // anticipation
};

struct EventMark {
  long iteration = 0;
  std::string label;
};

struct Series {
  std::string name;
  std::string color;
  const std::vector<double>* values = nullptr;  // one value per log row
};

class Svg {
 public:
  Svg(double width, double height) : width_(width), height_(height) {}

  void raw(const std::string& s) { body_ += s; }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            const std::string& extra = "") {
    body_ += "<line x1=\"" + f2(x1) + "\" y1=\"" + f2(y1) + "\" x2=\"" + f2(x2) + "\" y2=\"" +
             f2(y2) + "\" stroke=\"" + stroke + "\"" + (extra.empty() ? "" : " " + extra) +
             "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "") {
    body_ += "<rect x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" width=\"" + f2(w) + "\" height=\"" +
             f2(h) + "\" fill=\"" + fill + "\"" + (extra.empty() ? "" : " " + extra) + "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& extra = "") {
    body_ += "<circle cx=\"" + f2(cx) + "\" cy=\"" + f2(cy) + "\" r=\"" + f2(r) + "\" fill=\"" +
             fill + "\"" + (extra.empty() ? "" : " " + extra) + "/>\n";
  }

  void text(double x, double y, const std::string& content, int size,
            const std::string& anchor = "start", const std::string& extra = "") {
    body_ += "<text x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" font-family=\"monospace\" font-size=\"" +
             std::to_string(size) + "\" text-anchor=\"" + anchor + "\"" +
             (extra.empty() ? "" : " " + extra) + ">" + escape_xml(content) + "</text>\n";
  }

  void polyline(const std::string& points, const std::string& stroke, double width) {
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + f2(width) +
             "\" points=\"" + points + "\"/>\n";
  }

  std::string finish() const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + f2(width_) +
           "\" height=\"" + f2(height_) + "\" viewBox=\"0 0 " + f2(width_) + " " + f2(height_) +
           "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + f2(width_) + "\" height=\"" + f2(height_) +
           "\" fill=\"white\"/>\n";
    out += body_;
    out += "</svg>\n";
    return out;
  }

 private:
  double width_;
  double height_;
  std::string body_;
};

void write_svg(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Line charts (y fixed to [0,1]; all plotted quantities are intensities).
// ---------------------------------------------------------------------------

std::string line_chart(const std::string& title, const std::vector<long>& x,
                       const std::vector<Series>& left, const std::vector<Series>& right,
                       const std::string& left_label, const std::string& right_label,
                       const std::vector<EventMark>& events) {
  const double W = 860, H = 430, L = 62, T = 40, B = 48;
  const double R = 150;
  const double w = W - L - R, h = H - T - B;
  Svg svg(W, H);
  svg.text(W / 2, 22, title, 14, "middle", "font-weight=\"bold\"");

  long xmin = 0, xmax = 1;
  if (x.size() == 1) {
    xmin = x.front() - 1;
    xmax = x.front() + 1;
  } else if (x.size() > 1) {
    xmin = x.front();
    xmax = x.back();
  }
  auto px = [&](double it) { return L + w * (it - xmin) / static_cast<double>(xmax - xmin); };
  auto py = [&](double v) { return T + h * (1.0 - clamp01(v)); };

  // Gridlines + y ticks on both sides.
  const bool dual = !right.empty();
  for (int k = 0; k <= 4; ++k) {
    const double v = k / 4.0;
    const double y = py(v);
    svg.line(L, y, L + w, y, "#e0e0e0");
    svg.text(L - 8, y + 3, f2(v), 10, "end");
    if (dual) svg.text(L + w + 8, y + 3, f2(v), 10, "start");
  }
  // x ticks.
  for (int k = 0; k <= 4; ++k) {
    const double frac = k / 4.0;
    const auto value = static_cast<long>(std::lround(xmin + (xmax - xmin) * frac));
    const double xp = L + w * frac;
    svg.line(xp, T + h, xp, T + h + 4, "#333");
    svg.text(xp, T + h + 16, std::to_string(value), 10, "middle");
  }
  svg.line(L, T, L, T + h, "#333");
  svg.line(L, T + h, L + w, T + h, "#333");
  if (dual) svg.line(L + w, T, L + w, T + h, "#333");
  svg.text(L + w / 2, T + h + 34, "iteration", 11, "middle");
  svg.raw("<text x=\"16\" y=\"" + f2(T + h / 2) +
          "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
          f2(T + h / 2) + ")\">" + escape_xml(left_label) + "</text>\n");
  if (dual) {
    const double xr = L + w + 42;
    svg.raw("<text x=\"" + f2(xr) + "\" y=\"" + f2(T + h / 2) +
            "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(90 " +
            f2(xr) + " " + f2(T + h / 2) + ")\">" + escape_xml(right_label) + "</text>\n");
  }

  // Event markers.
  if (!x.empty()) {
    for (const EventMark& ev : events) {
      if (ev.iteration < xmin || ev.iteration > xmax) continue;
      const double xp = px(static_cast<double>(ev.iteration));
      svg.line(xp, T, xp, T + h, "#888", "stroke-dasharray=\"4,3\"");
      svg.text(xp + 4, T + 12, ev.label, 9, "start", "fill=\"#555\"");
    }
  }

  // Series paths.
  auto draw_series = [&](const std::vector<Series>& list) {
    for (const Series& s : list) {
      if (x.empty()) continue;
      std::string points;
      points.reserve(x.size() * 14);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0) points += ' ';
        points += f2(px(static_cast<double>(x[i]))) + "," + f2(py((*s.values)[i]));
      }
      svg.polyline(points, s.color, 1.2);
    }
  };
  draw_series(left);
  draw_series(right);

  // Legend, right margin.
  double ly = T + 8;
  const double lx = L + w + (dual ? 56.0 : 14.0);
  for (const std::vector<Series>* list : {&left, &right}) {
    for (const Series& s : *list) {
      svg.line(lx, ly - 3, lx + 18, ly - 3, s.color, "stroke-width=\"2\"");
      svg.text(lx + 24, ly, s.name, 10);
      ly += 16;
    }
  }
  return svg.finish();
}

// ---------------------------------------------------------------------------
// Heatmaps.
// ---------------------------------------------------------------------------

std::string heatmap(const std::string& title, const Eigen::MatrixXd& grid,
                    const std::vector<std::string>& row_labels, const std::string& x_label,
                    const std::string& y_label, const std::vector<long>& col_values,
                    bool fixed01) {
  const double W = 860, H = 430, L = 96, T = 40, B = 48, R = 110;
  const double w = W - L - R, h = H - T - B;
  Svg svg(W, H);
  svg.text(W / 2, 22, title, 14, "middle", "font-weight=\"bold\"");

  const auto rows = grid.rows();
  const auto cols = grid.cols();
  double vmin = 0.0, vmax = 1.0;
  if (!fixed01 && rows > 0 && cols > 0) {
    vmin = grid.minCoeff();
    vmax = grid.maxCoeff();
  }
  const double vspan = vmax > vmin ? vmax - vmin : 1.0;

  if (rows > 0 && cols > 0) {
    const double cw = w / static_cast<double>(cols);
    const double ch = h / static_cast<double>(rows);
    svg.raw("<g shape-rendering=\"crispEdges\">\n");
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double t = (grid(r, c) - vmin) / vspan;
        svg.rect(L + cw * static_cast<double>(c), T + ch * static_cast<double>(r), cw + 0.01,
                 ch + 0.01, rgb(ramp(t)));
      }
    }
    svg.raw("</g>\n");
    // Row labels or sparse numeric ticks.
    if (!row_labels.empty()) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        svg.text(L - 6, T + ch * (static_cast<double>(r) + 0.5) + 3,
                 row_labels[static_cast<std::size_t>(r)], 10, "end");
      }
    } else {
      svg.text(L - 6, T + ch * 0.5 + 3, "0", 10, "end");
      svg.text(L - 6, T + ch * (static_cast<double>(rows) - 0.5) + 3,
               std::to_string(rows - 1), 10, "end");
    }
    // Column ticks: first, middle, last.
    for (const double frac : {0.0, 0.5, 1.0}) {
      const auto c = static_cast<Eigen::Index>(std::lround(frac * static_cast<double>(cols - 1)));
      const long value = col_values.empty() ? static_cast<long>(c)
                                            : col_values[static_cast<std::size_t>(c)];
      svg.text(L + cw * (static_cast<double>(c) + 0.5), T + h + 16, std::to_string(value), 10,
               "middle");
    }
  }
  svg.line(L, T, L, T + h, "#333");
  svg.line(L, T + h, L + w, T + h, "#333");
  svg.text(L + w / 2, T + h + 34, x_label, 11, "middle");
  svg.raw("<text x=\"16\" y=\"" + f2(T + h / 2) +
          "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
          f2(T + h / 2) + ")\">" + escape_xml(y_label) + "</text>\n");

  // Color bar.
  const double bx = W - R + 40, bw = 16;
  const int segments = 32;
  for (int s = 0; s < segments; ++s) {
    const double t0 = static_cast<double>(s) / segments;
    const double y = T + h * (1.0 - static_cast<double>(s + 1) / segments);
    svg.rect(bx, y, bw, h / segments + 0.01, rgb(ramp(t0 + 0.5 / segments)));
  }
  svg.text(bx + bw + 6, T + h + 3, f3(vmin), 9);
  svg.text(bx + bw + 6, T + 9, f3(vmax), 9);
  return svg.finish();
}

// ---------------------------------------------------------------------------
// Networks: deterministic circular layout.
// ---------------------------------------------------------------------------

std::string network_figure(const std::string& title, int n,
                           const std::vector<WeightedLink>& links,
                           const std::vector<double>& reputations, bool size_by_reputation,
                           bool weighted_edges) {
  const double W = 560, H = 590;
  const double cx = W / 2, cy = 310, radius = 215;
  Svg svg(W, H);
  svg.text(W / 2, 24, title, 14, "middle", "font-weight=\"bold\"");
  const double tau = 6.283185307179586476925287;
  auto node_x = [&](int i) { return cx + radius * std::cos(tau * i / n - tau / 4.0); };
  auto node_y = [&](int i) { return cy + radius * std::sin(tau * i / n - tau / 4.0); };

  for (const WeightedLink& link : links) {
    const double width = weighted_edges ? 0.4 + 2.6 * clamp01(link.weight) : 1.0;
    const std::string extra = weighted_edges
                                  ? "stroke-width=\"" + f2(width) + "\" stroke-opacity=\"" +
                                        f2(0.35 + 0.55 * clamp01(link.weight)) + "\""
                                  : "stroke-width=\"1.00\" stroke-opacity=\"0.60\"";
    svg.line(node_x(link.source), node_y(link.source), node_x(link.target), node_y(link.target),
             weighted_edges ? "#1f77b4" : "#999999", extra);
  }
  for (int i = 0; i < n; ++i) {
    const double rep = i < static_cast<int>(reputations.size())
                           ? reputations[static_cast<std::size_t>(i)]
                           : 0.5;
    const double r = size_by_reputation ? 3.0 + 9.0 * clamp01(rep) : 6.0;
    svg.circle(node_x(i), node_y(i), r, "#ff7f0e", "stroke=\"white\" stroke-width=\"1.00\"");
  }
  if (n <= 40) {
    for (int i = 0; i < n; ++i) {
      const double lx = cx + (radius + 20) * std::cos(tau * i / n - tau / 4.0);
      const double ly = cy + (radius + 20) * std::sin(tau * i / n - tau / 4.0);
      svg.text(lx, ly + 3, std::to_string(i), 9, "middle", "fill=\"#333\"");
    }
  }
  return svg.finish();
}

struct NodeLinkData {
  int n = 0;
  std::vector<WeightedLink> links;
  std::vector<double> reputations;
};

NodeLinkData read_node_link(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("malformed network file " + path.string() + ": " + e.what());
  }
  NodeLinkData data;
  for (const auto& node : doc.at("nodes")) {
    data.reputations.push_back(node.at("reputation").get<double>());
  }
  data.n = static_cast<int>(data.reputations.size());
  for (const auto& link : doc.at("links")) {
    data.links.push_back({link.at("source").get<int>(), link.at("target").get<int>(),
                          link.at("weight").get<double>()});
  }
  return data;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir) {
  const auto manifest_path = run_dir / "run_manifest.json";
  std::ifstream manifest_in(manifest_path, std::ios::binary);
  if (!manifest_in) {
    throw std::runtime_error("missing artifact: " + manifest_path.string());
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(manifest_in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("malformed manifest " + manifest_path.string() + ": " + e.what());
  }

  std::vector<EventMark> events;
  if (manifest.contains("events")) {
    for (const auto& ev : manifest["events"]) {
      events.push_back({ev.at("iteration").get<long>(), ev.at("label").get<std::string>()});
    }
  }

  // First listed artifact of each kind wins.
  std::optional<std::filesystem::path> timeseries_path, trust_path, alloc_path, friendship_path,
      influence_path;
  for (const auto& entry : manifest.at("artifacts")) {
    const auto kind = entry.at("kind").get<std::string>();
    const auto file = run_dir / entry.at("file").get<std::string>();
    if (!std::filesystem::exists(file)) {
      throw std::runtime_error("missing artifact: " + file.string());
    }
    auto take = [&](std::optional<std::filesystem::path>& slot) {
      if (!slot) slot = file;
    };
    if (kind == "timeseries") take(timeseries_path);
    else if (kind == "trust_snapshot") take(trust_path);
    else if (kind == "allocation") take(alloc_path);
    else if (kind == "friendship_network") take(friendship_path);
    else if (kind == "influence_network") take(influence_path);
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = run_dir / name;
    write_svg(path, content);
    written.push_back(path);
  };

  if (timeseries_path) {
    const MetricsLog log = read_timeseries(*timeseries_path);
    std::vector<long> x;
    std::vector<double> opinion, trust;
    std::array<std::vector<double>, kEmotionCount> emotions;
    for (const MetricsRow& row : log.rows) {
      x.push_back(row.iteration);
      opinion.push_back(row.avg_opinion);
      trust.push_back(row.avg_trust);
      for (int k = 0; k < kEmotionCount; ++k) {
        emotions[static_cast<std::size_t>(k)].push_back(
            row.avg_emotions[static_cast<std::size_t>(k)]);
      }
    }
    emit("avg_opinion.svg",
         line_chart("Average Opinion Over Time", x, {{"avg_opinion", "#1f77b4", &opinion}}, {},
                    "average opinion", "", {}));
    emit("avg_trust.svg",
         line_chart("Average Trust Over Time", x, {{"avg_trust", "#d62728", &trust}}, {},
                    "average trust", "", {}));
    std::vector<Series> emotion_series;
    for (int k = 0; k < kEmotionCount; ++k) {
      emotion_series.push_back({std::string(kEmotionNames[static_cast<std::size_t>(k)]),
                                kSeriesColors[static_cast<std::size_t>(k)],
                                &emotions[static_cast<std::size_t>(k)]});
    }
    emit("avg_emotions.svg",
         line_chart("Average Emotions Over Time", x, emotion_series, {}, "average intensity", "",
                    {}));
    emit("opinion_trust_events.svg",
         line_chart("Average Opinion and Trust with Events", x,
                    {{"avg_opinion", "#1f77b4", &opinion}}, {{"avg_trust", "#d62728", &trust}},
                    "average opinion", "average trust", events));

    // Emotion heatmap: channels x time, every 10th iteration.
    std::vector<long> sampled;
    for (std::size_t i = 0; i < log.rows.size(); i += 10) sampled.push_back(log.rows[i].iteration);
    Eigen::MatrixXd grid(kEmotionCount, static_cast<Eigen::Index>(sampled.size()));
    for (Eigen::Index c = 0; c < grid.cols(); ++c) {
      for (int k = 0; k < kEmotionCount; ++k) {
        grid(k, c) =
            log.rows[static_cast<std::size_t>(c) * 10].avg_emotions[static_cast<std::size_t>(k)];
      }
    }
    std::vector<std::string> labels;
    for (auto name : kEmotionNames) labels.emplace_back(name);
    emit("emotion_heatmap.svg", heatmap("Average Emotion Intensities Over Time", grid, labels,
                                        "iteration (every 10th)", "emotion", sampled, true));
  }

  if (trust_path) {
    const Eigen::MatrixXd grid = read_matrix_snapshot(*trust_path);
    emit("trust_heatmap.svg", heatmap("Trust Matrix Snapshot", grid, {}, "trusted agent j",
                                      "trusting agent i", {}, true));
  }
  if (alloc_path) {
    const Eigen::MatrixXd grid = read_matrix_snapshot(*alloc_path);
    emit("allocation_map.svg",
         heatmap("Resource Allocation Snapshot", grid, {}, "agent", "area", {}, false));
  }
  if (friendship_path) {
    const NodeLinkData data = read_node_link(*friendship_path);
    emit("friendship_network.svg",
         network_figure("Friendship Network", data.n, data.links, data.reputations, false, false));
  }
  if (influence_path) {
    const NodeLinkData data = read_node_link(*influence_path);
    emit("influence_network.svg",
         network_figure("Influence Network", data.n, data.links, data.reputations, true, true));
  }
  return written;
}

}  // namespace trustsim

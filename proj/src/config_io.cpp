#include "trustsim/config_io.hpp"

#include <fstream>

namespace trustsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigParseError(path.empty() ? what : path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) {
      if (key == k) { ok = true; break; }
    }
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::string join_path(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback, bool* present = nullptr) {
  if (!obj.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join_path(path, key), "expected a number");
  return v.get<double>();
}

long get_integer(const json& obj, const std::string& path, const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join_path(path, key), "expected an integer");
  return v.get<long>();
}

Eigen::VectorXd get_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

Topology topology_from_json(const json& t) {
  if (!t.is_object() || !t.contains("kind") || !t.at("kind").is_string()) {
    fail("topology", "expected an object with a string \"kind\"");
  }
  const std::string kind = t.at("kind").get<std::string>();
  if (kind == "complete") {
    reject_unknown_keys(t, "topology", {"kind"});
    return CompleteTopology{};
  }
  if (kind == "preferential_attachment") {
    reject_unknown_keys(t, "topology", {"kind", "m"});
    PreferentialAttachment pa;
    pa.m = static_cast<int>(get_integer(t, "topology", "m", 2));
    return pa;
  }
  if (kind == "tree") {
    reject_unknown_keys(t, "topology", {"kind", "branching"});
    TreeTopology tree;
    tree.branching = static_cast<int>(get_integer(t, "topology", "branching", 2));
    return tree;
  }
  fail("topology.kind", "unknown topology \"" + kind + "\"");
}

std::vector<Stimulus> stimuli_from_json(const json& arr, const std::string& path) {
  std::vector<Stimulus> out;
  if (!arr.is_array()) fail(path, "expected an array");
  for (std::size_t s = 0; s < arr.size(); ++s) {
    const json& e = arr[s];
    const std::string spath = path + "[" + std::to_string(s) + "]";
    if (!e.is_object()) fail(spath, "expected an object {channel, magnitude}");
    reject_unknown_keys(e, spath, {"channel", "magnitude"});
    if (!e.contains("channel") || !e.at("channel").is_string()) {
      fail(spath + ".channel", "expected an emotion channel name");
    }
    auto ch = parse_emotion_channel(e.at("channel").get<std::string>());
    if (!ch) fail(spath + ".channel", "unknown emotion channel \"" +
                                          e.at("channel").get<std::string>() + "\"");
    Stimulus st;
    st.channel = *ch;
    st.magnitude = get_number(e, spath, "magnitude", 0.0);
    out.push_back(st);
  }
  return out;
}

EventSpec event_from_json(const json& e, const std::string& path) {
  if (!e.is_object()) fail(path, "expected an object");
  if (!e.contains("kind") || !e.at("kind").is_string()) {
    fail(path + ".kind", "expected a string event kind");
  }
  EventSpec ev;
  ev.iteration = get_integer(e, path, "iteration", 0);
  const std::string kind = e.at("kind").get<std::string>();
  if (kind == "opinion_shock") {
    reject_unknown_keys(e, path, {"kind", "iteration", "delta", "target_fraction",
                                  "emotion_stimuli", "label"});
    OpinionShock s;
    s.delta = get_number(e, path, "delta", 0.0);
    s.target_fraction = get_number(e, path, "target_fraction", 1.0);
    ev.payload = s;
  } else if (kind == "urgency_shift") {
    reject_unknown_keys(e, path, {"kind", "iteration", "urgency", "emotion_stimuli", "label"});
    if (!e.contains("urgency")) fail(path + ".urgency", "required for urgency_shift");
    UrgencyShift s;
    s.urgency = get_vector(e.at("urgency"), path + ".urgency");
    ev.payload = s;
  } else if (kind == "trust_shock") {
    reject_unknown_keys(e, path, {"kind", "iteration", "factor", "emotion_stimuli", "label"});
    TrustShock s;
    s.factor = get_number(e, path, "factor", 1.0);
    ev.payload = s;
  } else {
    fail(path + ".kind", "unknown event kind \"" + kind + "\"");
  }
  if (e.contains("emotion_stimuli")) {
    ev.emotion_stimuli = stimuli_from_json(e.at("emotion_stimuli"), path + ".emotion_stimuli");
  }
  ev.label = e.contains("label") ? e.at("label").get<std::string>() : std::string(kind);
  return ev;
}

CoefficientSet coefficients_from_json(const json& c) {
  const std::initializer_list<std::string_view> kKnown = {
      "alpha_base", "p_contrarian", "eta", "gamma_penalty", "lambda", "rho", "nu",
      "sigma_noise", "theta_m", "theta_h", "n_min", "c_h", "cognitive_capacity",
      "memory_capacity", "beta", "mu", "s_gain", "kappa_baseline"};
  if (!c.is_object()) fail("coefficients", "expected an object");
  reject_unknown_keys(c, "coefficients", kKnown);
  CoefficientSet out;
  const std::string p = "coefficients";
  out.alpha_base = get_number(c, p, "alpha_base", out.alpha_base);
  out.p_contrarian = get_number(c, p, "p_contrarian", out.p_contrarian);
  out.eta = get_number(c, p, "eta", out.eta);
  out.gamma_penalty = get_number(c, p, "gamma_penalty", out.gamma_penalty);
  out.lambda = get_number(c, p, "lambda", out.lambda);
  out.rho = get_number(c, p, "rho", out.rho);
  out.nu = get_number(c, p, "nu", out.nu);
  out.sigma_noise = get_number(c, p, "sigma_noise", out.sigma_noise);
  out.theta_m = get_number(c, p, "theta_m", out.theta_m);
  out.theta_h = get_number(c, p, "theta_h", out.theta_h);
  out.n_min = static_cast<int>(get_integer(c, p, "n_min", out.n_min));
  out.c_h = get_number(c, p, "c_h", out.c_h);
  out.cognitive_capacity =
      static_cast<int>(get_integer(c, p, "cognitive_capacity", out.cognitive_capacity));
  out.memory_capacity =
      static_cast<int>(get_integer(c, p, "memory_capacity", out.memory_capacity));
  out.beta = get_number(c, p, "beta", out.beta);
  out.mu = get_number(c, p, "mu", out.mu);
  out.s_gain = get_number(c, p, "s_gain", out.s_gain);
  if (c.contains("kappa_baseline")) {
    const json& kb = c.at("kappa_baseline");
    if (!kb.is_object()) fail("coefficients.kappa_baseline", "expected an object keyed by channel");
    for (const auto& [key, val] : kb.items()) {
      auto ch = parse_emotion_channel(key);
      if (!ch) fail("coefficients.kappa_baseline." + key, "unknown emotion channel");
      if (!val.is_number()) fail("coefficients.kappa_baseline." + key, "expected a number");
      out.kappa_baseline(static_cast<int>(*ch)) = val.get<double>();
    }
  }
  return out;
}

std::vector<long> snapshots_from_json(const json& arr, const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array of integers");
  std::vector<long> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) fail(path + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(arr[i].get<long>());
  }
  return out;
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "config root must be an object");
  const std::initializer_list<std::string_view> kKnown = {
      "n_agents", "n_areas", "total_iterations", "topology", "base_urgency", "priorities",
      "budget", "coefficients", "events", "snapshot_iterations", "trust_snapshot_iterations",
      "allocation_snapshot_iterations", "monitoring", "overrides", "seed"};
  reject_unknown_keys(doc, "", kKnown);

  ScenarioConfig cfg;
  cfg.n_agents = static_cast<int>(get_integer(doc, "", "n_agents", cfg.n_agents));
  cfg.n_areas = static_cast<int>(get_integer(doc, "", "n_areas", cfg.n_areas));
  cfg.total_iterations = get_integer(doc, "", "total_iterations", cfg.total_iterations);
  if (doc.contains("topology")) cfg.topology = topology_from_json(doc.at("topology"));
  if (doc.contains("base_urgency")) {
    cfg.base_urgency = get_vector(doc.at("base_urgency"), "base_urgency");
  } else {
    cfg.base_urgency = Eigen::VectorXd::Ones(cfg.n_areas);
  }
  if (doc.contains("priorities") && !doc.at("priorities").is_null()) {
    const json& pr = doc.at("priorities");
    if (!pr.is_array()) fail("priorities", "expected an array of per-agent arrays");
    Eigen::MatrixXd mat(pr.size(), pr.empty() ? 0 : pr[0].size());
    for (std::size_t i = 0; i < pr.size(); ++i) {
      Eigen::VectorXd row = get_vector(pr[i], "priorities[" + std::to_string(i) + "]");
      if (row.size() != mat.cols()) {
        fail("priorities[" + std::to_string(i) + "]", "ragged row");
      }
      mat.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    cfg.priorities = mat;
  }
  cfg.budget = get_number(doc, "", "budget", cfg.budget);
  if (doc.contains("coefficients")) cfg.coefficients = coefficients_from_json(doc.at("coefficients"));
  if (doc.contains("events")) {
    const json& evs = doc.at("events");
    if (!evs.is_array()) fail("events", "expected an array");
    for (std::size_t e = 0; e < evs.size(); ++e) {
      cfg.events.push_back(event_from_json(evs[e], "events[" + std::to_string(e) + "]"));
    }
  }
  if (doc.contains("snapshot_iterations")) {
    cfg.snapshot_iterations = snapshots_from_json(doc.at("snapshot_iterations"), "snapshot_iterations");
  }
  if (doc.contains("trust_snapshot_iterations")) {
    cfg.trust_snapshot_iterations =
        snapshots_from_json(doc.at("trust_snapshot_iterations"), "trust_snapshot_iterations");
  }
  if (doc.contains("allocation_snapshot_iterations")) {
    cfg.allocation_snapshot_iterations = snapshots_from_json(
        doc.at("allocation_snapshot_iterations"), "allocation_snapshot_iterations");
  }
  if (doc.contains("monitoring")) {
    const json& m = doc.at("monitoring");
    if (!m.is_object()) fail("monitoring", "expected an object");
    reject_unknown_keys(m, "monitoring", {"enabled", "monitored_agents"});
    if (m.contains("enabled")) {
      if (!m.at("enabled").is_boolean()) fail("monitoring.enabled", "expected a boolean");
      cfg.monitoring.enabled = m.at("enabled").get<bool>();
    }
    if (m.contains("monitored_agents")) {
      for (long id : snapshots_from_json(m.at("monitored_agents"), "monitoring.monitored_agents")) {
        cfg.monitoring.monitored_agents.push_back(static_cast<int>(id));
      }
    }
  }
  if (doc.contains("overrides")) {
    const json& o = doc.at("overrides");
    if (!o.is_object()) fail("overrides", "expected an object");
    reject_unknown_keys(o, "overrides",
                        {"openness", "conscientiousness", "extraversion", "agreeableness",
                         "neuroticism", "moral_integrity", "initial_opinion", "initial_trust"});
    auto opt = [&](const char* key) -> std::optional<double> {
      bool present = false;
      double v = get_number(o, "overrides", key, 0.0, &present);
      return present ? std::optional<double>(v) : std::nullopt;
    };
    cfg.overrides.openness = opt("openness");
    cfg.overrides.conscientiousness = opt("conscientiousness");
    cfg.overrides.extraversion = opt("extraversion");
    cfg.overrides.agreeableness = opt("agreeableness");
    cfg.overrides.neuroticism = opt("neuroticism");
    cfg.overrides.moral_integrity = opt("moral_integrity");
    cfg.overrides.initial_opinion = opt("initial_opinion");
    cfg.overrides.initial_trust = opt("initial_trust");
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer()) fail("seed", "expected an integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  return cfg;
}

ordered_json config_to_json(const ScenarioConfig& cfg) {
  ordered_json doc;
  doc["n_agents"] = cfg.n_agents;
  doc["n_areas"] = cfg.n_areas;
  doc["total_iterations"] = cfg.total_iterations;

  ordered_json topo;
  topo["kind"] = std::string(topology_kind_name(cfg.topology));
  if (const auto* pa = std::get_if<PreferentialAttachment>(&cfg.topology)) {
    topo["m"] = pa->m;
  } else if (const auto* tree = std::get_if<TreeTopology>(&cfg.topology)) {
    topo["branching"] = tree->branching;
  }
  doc["topology"] = topo;

  doc["base_urgency"] = std::vector<double>(cfg.base_urgency.begin(), cfg.base_urgency.end());
  if (cfg.priorities) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < cfg.priorities->rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index a = 0; a < cfg.priorities->cols(); ++a) row.push_back((*cfg.priorities)(i, a));
      rows.push_back(row);
    }
    doc["priorities"] = rows;
  }
  doc["budget"] = cfg.budget;

  const CoefficientSet& c = cfg.coefficients;
  ordered_json co;
  co["alpha_base"] = c.alpha_base;
  co["p_contrarian"] = c.p_contrarian;
  co["eta"] = c.eta;
  co["gamma_penalty"] = c.gamma_penalty;
  co["lambda"] = c.lambda;
  co["rho"] = c.rho;
  co["nu"] = c.nu;
  co["sigma_noise"] = c.sigma_noise;
  co["theta_m"] = c.theta_m;
  co["theta_h"] = c.theta_h;
  co["n_min"] = c.n_min;
  co["c_h"] = c.c_h;
  co["cognitive_capacity"] = c.cognitive_capacity;
  co["memory_capacity"] = c.memory_capacity;
  co["beta"] = c.beta;
  co["mu"] = c.mu;
  co["s_gain"] = c.s_gain;
  ordered_json kb;
  for (int k = 0; k < kEmotionCount; ++k) {
    kb[std::string(kEmotionNames[static_cast<std::size_t>(k)])] = c.kappa_baseline(k);
  }
  co["kappa_baseline"] = kb;
  doc["coefficients"] = co;

  ordered_json events = ordered_json::array();
  for (const EventSpec& ev : cfg.events) {
    ordered_json e;
    e["kind"] = std::string(event_kind_name(ev));
    e["iteration"] = ev.iteration;
    if (const auto* shock = std::get_if<OpinionShock>(&ev.payload)) {
      e["delta"] = shock->delta;
      e["target_fraction"] = shock->target_fraction;
    } else if (const auto* shift = std::get_if<UrgencyShift>(&ev.payload)) {
      e["urgency"] = std::vector<double>(shift->urgency.begin(), shift->urgency.end());
    } else if (const auto* ts = std::get_if<TrustShock>(&ev.payload)) {
      e["factor"] = ts->factor;
    }
    if (!ev.emotion_stimuli.empty()) {
      ordered_json stim = ordered_json::array();
      for (const Stimulus& s : ev.emotion_stimuli) {
        ordered_json one;
        one["channel"] = std::string(kEmotionNames[static_cast<std::size_t>(s.channel)]);
        one["magnitude"] = s.magnitude;
        stim.push_back(one);
      }
      e["emotion_stimuli"] = stim;
    }
    e["label"] = ev.label;
    events.push_back(e);
  }
  doc["events"] = events;

  doc["snapshot_iterations"] = cfg.snapshot_iterations;
  if (cfg.trust_snapshot_iterations) {
    doc["trust_snapshot_iterations"] = *cfg.trust_snapshot_iterations;
  }
  if (cfg.allocation_snapshot_iterations) {
    doc["allocation_snapshot_iterations"] = *cfg.allocation_snapshot_iterations;
  }

  ordered_json mon;
  mon["enabled"] = cfg.monitoring.enabled;
  mon["monitored_agents"] = cfg.monitoring.monitored_agents;
  doc["monitoring"] = mon;

  ordered_json ov;
  auto put = [&](const char* key, const std::optional<double>& o) {
    if (o) ov[key] = *o;
  };
  put("openness", cfg.overrides.openness);
  put("conscientiousness", cfg.overrides.conscientiousness);
  put("extraversion", cfg.overrides.extraversion);
  put("agreeableness", cfg.overrides.agreeableness);
  put("neuroticism", cfg.overrides.neuroticism);
  put("moral_integrity", cfg.overrides.moral_integrity);
  put("initial_opinion", cfg.overrides.initial_opinion);
  put("initial_trust", cfg.overrides.initial_trust);
  if (!ov.empty()) doc["overrides"] = ov;

  doc["seed"] = cfg.seed;
  return doc;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file: " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(path.string() + ": " + e.what());
  }
  try {
    return config_from_json(doc);
  } catch (const ConfigParseError& e) {
    throw ConfigParseError(path.string() + ": " + e.what());
  }
}

}  // namespace trustsim

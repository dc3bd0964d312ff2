#include "trustsim/core.hpp"

#include <sstream>

namespace trustsim {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_unit(std::vector<Violation>& out, const std::string& path, double v) {
  if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) {
    out.push_back({path, "must be within [0,1] (got " + num(v) + ")"});
  }
}

void check_nonneg(std::vector<Violation>& out, const std::string& path, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    out.push_back({path, "must be finite and >= 0 (got " + num(v) + ")"});
  }
}

void check_min_int(std::vector<Violation>& out, const std::string& path, long v, long lo) {
  if (v < lo) {
    out.push_back({path, "must be >= " + std::to_string(lo) + " (got " + std::to_string(v) + ")"});
  }
}

}  // namespace

std::optional<EmotionChannel> parse_emotion_channel(std::string_view name) {
  for (int k = 0; k < kEmotionCount; ++k) {
    if (kEmotionNames[static_cast<std::size_t>(k)] == name) {
      return static_cast<EmotionChannel>(k);
    }
  }
  return std::nullopt;
}

std::string_view topology_kind_name(const Topology& t) {
  if (std::holds_alternative<CompleteTopology>(t)) return "complete";
  if (std::holds_alternative<PreferentialAttachment>(t)) return "preferential_attachment";
  return "tree";
}

std::string_view event_kind_name(const EventSpec& ev) {
  if (std::holds_alternative<OpinionShock>(ev.payload)) return "opinion_shock";
  if (std::holds_alternative<UrgencyShift>(ev.payload)) return "urgency_shift";
  return "trust_shock";
}

std::vector<long> effective_trust_snapshots(const ScenarioConfig& cfg) {
  return cfg.trust_snapshot_iterations ? *cfg.trust_snapshot_iterations
                                       : cfg.snapshot_iterations;
}

std::vector<long> effective_allocation_snapshots(const ScenarioConfig& cfg) {
  return cfg.allocation_snapshot_iterations ? *cfg.allocation_snapshot_iterations
                                            : cfg.snapshot_iterations;
}

std::vector<Violation> validate_config(const ScenarioConfig& cfg) {
  std::vector<Violation> v;

  check_min_int(v, "n_agents", cfg.n_agents, 1);
  check_min_int(v, "n_areas", cfg.n_areas, 1);
  check_min_int(v, "total_iterations", cfg.total_iterations, 0);

  if (const auto* pa = std::get_if<PreferentialAttachment>(&cfg.topology)) {
    if (pa->m < 1) {
      v.push_back({"topology.m", "must be >= 1 (got " + std::to_string(pa->m) + ")"});
    } else if (cfg.n_agents >= 1 && pa->m >= cfg.n_agents) {
      v.push_back({"topology.m", "must be < n_agents (got " + std::to_string(pa->m) + ")"});
    }
  } else if (const auto* tree = std::get_if<TreeTopology>(&cfg.topology)) {
    if (tree->branching < 1) {
      v.push_back({"topology.branching",
                   "must be >= 1 (got " + std::to_string(tree->branching) + ")"});
    }
  }

  if (cfg.base_urgency.size() != cfg.n_areas) {
    v.push_back({"base_urgency", "must have n_areas entries (got " +
                                     std::to_string(cfg.base_urgency.size()) + ")"});
  }
  for (Eigen::Index a = 0; a < cfg.base_urgency.size(); ++a) {
    check_nonneg(v, "base_urgency[" + std::to_string(a) + "]", cfg.base_urgency(a));
  }

  if (cfg.priorities) {
    if (cfg.priorities->rows() != cfg.n_agents || cfg.priorities->cols() != cfg.n_areas) {
      v.push_back({"priorities", "must be n_agents x n_areas (got " +
                                     std::to_string(cfg.priorities->rows()) + " x " +
                                     std::to_string(cfg.priorities->cols()) + ")"});
    } else {
      for (Eigen::Index i = 0; i < cfg.priorities->rows(); ++i) {
        for (Eigen::Index a = 0; a < cfg.priorities->cols(); ++a) {
          if (!((*cfg.priorities)(i, a) >= 0.0) || !std::isfinite((*cfg.priorities)(i, a))) {
            v.push_back({"priorities[" + std::to_string(i) + "][" + std::to_string(a) + "]",
                         "must be finite and >= 0"});
            break;  // one violation per agent row is enough signal
          }
        }
      }
    }
  }

  check_nonneg(v, "budget", cfg.budget);

  const CoefficientSet& c = cfg.coefficients;
  check_unit(v, "coefficients.alpha_base", c.alpha_base);
  check_unit(v, "coefficients.p_contrarian", c.p_contrarian);
  check_unit(v, "coefficients.eta", c.eta);
  check_unit(v, "coefficients.gamma_penalty", c.gamma_penalty);
  check_unit(v, "coefficients.lambda", c.lambda);
  check_unit(v, "coefficients.rho", c.rho);
  check_nonneg(v, "coefficients.nu", c.nu);
  check_nonneg(v, "coefficients.sigma_noise", c.sigma_noise);
  check_unit(v, "coefficients.theta_m", c.theta_m);
  check_unit(v, "coefficients.theta_h", c.theta_h);
  check_min_int(v, "coefficients.n_min", c.n_min, 1);
  check_unit(v, "coefficients.c_h", c.c_h);
  check_min_int(v, "coefficients.cognitive_capacity", c.cognitive_capacity, 1);
  check_min_int(v, "coefficients.memory_capacity", c.memory_capacity, 1);
  check_nonneg(v, "coefficients.beta", c.beta);
  check_nonneg(v, "coefficients.mu", c.mu);
  check_nonneg(v, "coefficients.s_gain", c.s_gain);
  for (int k = 0; k < kEmotionCount; ++k) {
    check_unit(v, "coefficients.kappa_baseline." + std::string(kEmotionNames[static_cast<std::size_t>(k)]),
               c.kappa_baseline(k));
  }

  for (std::size_t e = 0; e < cfg.events.size(); ++e) {
    const EventSpec& ev = cfg.events[e];
    const std::string base = "events[" + std::to_string(e) + "]";
    if (ev.iteration < 0 || ev.iteration > cfg.total_iterations) {
      v.push_back({base + ".iteration",
                   "must be within [0, total_iterations] (got " + std::to_string(ev.iteration) + ")"});
    }
    if (const auto* shock = std::get_if<OpinionShock>(&ev.payload)) {
      if (!std::isfinite(shock->delta)) {
        v.push_back({base + ".delta", "must be finite"});
      }
      check_unit(v, base + ".target_fraction", shock->target_fraction);
    } else if (const auto* shift = std::get_if<UrgencyShift>(&ev.payload)) {
      if (shift->urgency.size() != cfg.n_areas) {
        v.push_back({base + ".urgency", "must have n_areas entries (got " +
                                            std::to_string(shift->urgency.size()) + ")"});
      }
      for (Eigen::Index a = 0; a < shift->urgency.size(); ++a) {
        check_nonneg(v, base + ".urgency[" + std::to_string(a) + "]", shift->urgency(a));
      }
    } else if (const auto* ts = std::get_if<TrustShock>(&ev.payload)) {
      check_nonneg(v, base + ".factor", ts->factor);
    }
    for (std::size_t s = 0; s < ev.emotion_stimuli.size(); ++s) {
      check_nonneg(v, base + ".emotion_stimuli[" + std::to_string(s) + "].magnitude",
                   ev.emotion_stimuli[s].magnitude);
    }
  }

  auto check_snaps = [&](const std::vector<long>& snaps, const std::string& path) {
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      if (snaps[s] < 0 || snaps[s] > cfg.total_iterations) {
        v.push_back({path + "[" + std::to_string(s) + "]",
                     "must be within [0, total_iterations] (got " + std::to_string(snaps[s]) + ")"});
      }
    }
  };
  check_snaps(cfg.snapshot_iterations, "snapshot_iterations");
  if (cfg.trust_snapshot_iterations) {
    check_snaps(*cfg.trust_snapshot_iterations, "trust_snapshot_iterations");
  }
  if (cfg.allocation_snapshot_iterations) {
    check_snaps(*cfg.allocation_snapshot_iterations, "allocation_snapshot_iterations");
  }

  for (std::size_t i = 0; i < cfg.monitoring.monitored_agents.size(); ++i) {
    int id = cfg.monitoring.monitored_agents[i];
    if (id < 0 || id >= cfg.n_agents) {
      v.push_back({"monitoring.monitored_agents[" + std::to_string(i) + "]",
                   "must be a valid agent id (got " + std::to_string(id) + ")"});
    }
  }

  auto check_override = [&](const std::optional<double>& o, const std::string& path) {
    if (o) check_unit(v, path, *o);
  };
  check_override(cfg.overrides.openness, "overrides.openness");
  check_override(cfg.overrides.conscientiousness, "overrides.conscientiousness");
  check_override(cfg.overrides.extraversion, "overrides.extraversion");
  check_override(cfg.overrides.agreeableness, "overrides.agreeableness");
  check_override(cfg.overrides.neuroticism, "overrides.neuroticism");
  check_override(cfg.overrides.moral_integrity, "overrides.moral_integrity");
  check_override(cfg.overrides.initial_opinion, "overrides.initial_opinion");
  check_override(cfg.overrides.initial_trust, "overrides.initial_trust");

  return v;
}

}  // namespace trustsim

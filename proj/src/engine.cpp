#include "trustsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "trustsim/dynamics.hpp"

namespace trustsim {

namespace {

double draw_or(RandomStream& rng, const std::optional<double>& pinned) {
  if (pinned) return *pinned;
  return rng.uniform01();
}

// ceil(frac * n) with a guard against representation error in frac * n
// (e.g. 0.1 * 20 evaluating just above 2.0 must still give 2).
int shock_target_count(double frac, int n) {
  const double raw = frac * static_cast<double>(n);
  const int count = static_cast<int>(std::ceil(raw - 1e-9));
  return std::clamp(count, 0, n);
}

struct Interaction {
  int initiator = 0;
  int receiver = 0;
  double feedback = 0.0;
};

int initiations_per_step(const AgentState& agent) {
  return 1 + static_cast<int>(std::lround(2.0 * agent.personality.extraversion));
}

GateContext make_gate_context(const SimulationState& state, int trustor, int trustee) {
  GateContext ctx;
  ctx.friendship_edge = state.graph.has_edge(trustor, trustee);
  ctx.shared_area_last_step =
      state.last_top_area[static_cast<std::size_t>(trustor)] >= 0 &&
      state.last_top_area[static_cast<std::size_t>(trustor)] ==
          state.last_top_area[static_cast<std::size_t>(trustee)];
  ctx.partner_integrity = state.agents[static_cast<std::size_t>(trustee)].moral_integrity;
  const MonitoringSpec& mon = state.config.monitoring;
  ctx.monitoring_enabled = mon.enabled;
  ctx.partner_monitored =
      std::find(mon.monitored_agents.begin(), mon.monitored_agents.end(), trustee) !=
      mon.monitored_agents.end();
  for (const InteractionRecord& rec : state.agents[static_cast<std::size_t>(trustor)].memory) {
    if (rec.partner != trustee) continue;
    ++ctx.total_count;
    if (rec.feedback > 0.0) ++ctx.positive_count;
  }
  return ctx;
}

}  // namespace

SimulationState init_state(const ScenarioConfig& cfg) {
  SimulationState state;
  state.config = cfg;
  state.iteration = 0;

  RandomStream topo_rng = derive_stream(cfg.seed, "topology");
  state.graph = generate_topology(cfg.topology, cfg.n_agents, topo_rng);

  RandomStream init_rng = derive_stream(cfg.seed, "init");
  const auto n = static_cast<std::size_t>(cfg.n_agents);
  const InitOverrides& ov = cfg.overrides;
  state.agents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentState& a = state.agents[i];
    a.id = static_cast<int>(i);
    a.opinion = draw_or(init_rng, ov.initial_opinion);
    a.personality.openness = draw_or(init_rng, ov.openness);
    a.personality.conscientiousness = draw_or(init_rng, ov.conscientiousness);
    a.personality.extraversion = draw_or(init_rng, ov.extraversion);
    a.personality.agreeableness = draw_or(init_rng, ov.agreeableness);
    a.personality.neuroticism = draw_or(init_rng, ov.neuroticism);
    a.moral_integrity = draw_or(init_rng, ov.moral_integrity);
    for (int k = 0; k < kEmotionCount; ++k) a.emotions[k] = init_rng.uniform01();
    a.budget = cfg.budget;
  }

  state.trust = TrustMatrix::Ones(cfg.n_agents, cfg.n_agents);
  for (int i = 0; i < cfg.n_agents; ++i) {
    for (int j = 0; j < cfg.n_agents; ++j) {
      if (i == j) continue;
      state.trust(i, j) = draw_or(init_rng, ov.initial_trust);
    }
  }

  if (cfg.priorities) {
    state.priorities = *cfg.priorities;
  } else {
    state.priorities.resize(cfg.n_agents, cfg.n_areas);
    for (int i = 0; i < cfg.n_agents; ++i) {
      for (int a = 0; a < cfg.n_areas; ++a) state.priorities(i, a) = init_rng.uniform01();
    }
  }

  state.urgency = cfg.base_urgency;
  state.last_allocation = Eigen::MatrixXd::Zero(cfg.n_areas, cfg.n_agents);
  state.last_top_area.assign(n, -1);

  const std::vector<double> reps = compute_reputation(state.trust);
  for (std::size_t i = 0; i < n; ++i) state.agents[i].reputation = reps[i];

  state.loop_rng = derive_stream(cfg.seed, "loop");
  return state;
}

void apply_event(SimulationState& state, const EventSpec& ev) {
  if (ev.iteration != state.iteration) {
    throw std::logic_error("apply_event: event scheduled for iteration " +
                           std::to_string(ev.iteration) + " applied at iteration " +
                           std::to_string(state.iteration));
  }
  const int n = state.config.n_agents;
  if (const auto* shock = std::get_if<OpinionShock>(&ev.payload)) {
    const int count = shock_target_count(shock->target_fraction, n);
    // Partial Fisher-Yates over agent ids: one draw per sampled agent.
    std::vector<int> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    for (int r = 0; r < count; ++r) {
      const auto span = static_cast<std::uint64_t>(n - r);
      const auto j = static_cast<std::size_t>(r) +
                     static_cast<std::size_t>(state.loop_rng.uniform_below(span));
      std::swap(ids[static_cast<std::size_t>(r)], ids[j]);
    }
    for (int r = 0; r < count; ++r) {
      AgentState& a = state.agents[static_cast<std::size_t>(ids[static_cast<std::size_t>(r)])];
      a.opinion = clamp01(a.opinion + shock->delta);
    }
  } else if (const auto* shift = std::get_if<UrgencyShift>(&ev.payload)) {
    state.urgency = shift->urgency;
  } else {
    const double factor = std::get<TrustShock>(ev.payload).factor;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) state.trust(i, j) = clamp01(state.trust(i, j) * factor);
      }
    }
  }
  if (!ev.emotion_stimuli.empty()) {
    for (AgentState& a : state.agents) {
      a.emotions = update_emotions(a.emotions, ev.emotion_stimuli, state.config.coefficients,
                                   a.personality.neuroticism);
    }
  }
}

Eigen::VectorXd allocate_resources(double opinion, double budget,
                                   const Eigen::VectorXd& urgency,
                                   const Eigen::VectorXd& priorities_i, double mu) {
  const auto n_areas = urgency.size();
  Eigen::VectorXd value(n_areas);
  double total = 0.0;
  for (Eigen::Index a = 0; a < n_areas; ++a) {
    value[a] = urgency[a] * (1.0 + mu * opinion * priorities_i[a]);
    total += value[a];
  }
  Eigen::VectorXd alloc(n_areas);
  if (total > 0.0) {
    for (Eigen::Index a = 0; a < n_areas; ++a) alloc[a] = budget * value[a] / total;
  } else {
    const double share = budget / static_cast<double>(n_areas);
    for (Eigen::Index a = 0; a < n_areas; ++a) alloc[a] = share;
  }
  return alloc;
}

void step(SimulationState& state) {
  const ScenarioConfig& cfg = state.config;
  const CoefficientSet& coeffs = cfg.coefficients;
  const int n = cfg.n_agents;
  const auto un = static_cast<std::size_t>(n);
  if (state.iteration >= cfg.total_iterations) {
    throw std::logic_error("step: already at total_iterations");
  }
  state.iteration += 1;

  // (1) Events scheduled for this iteration, in config order, then the
  // start-of-iteration snapshot every synchronous phase reads.
  for (const EventSpec& ev : cfg.events) {
    if (ev.iteration == state.iteration) apply_event(state, ev);
  }
  std::vector<double> opinion_snap(un);
  for (std::size_t i = 0; i < un; ++i) opinion_snap[i] = state.agents[i].opinion;
  const TrustMatrix trust_snap = state.trust;

  // (2) Partner selection. Propensities toward each candidate come from the
  // selecting agent's memory (same arithmetic as propensity_multiplier, one
  // memory pass per agent).
  std::vector<std::vector<int>> incoming(un);
  std::vector<double> feedback_sum(un);
  std::vector<int> feedback_count(un);
  std::vector<double> propensity(un);
  for (int i = 0; i < n; ++i) {
    const AgentState& agent = state.agents[static_cast<std::size_t>(i)];
    std::fill(feedback_sum.begin(), feedback_sum.end(), 0.0);
    std::fill(feedback_count.begin(), feedback_count.end(), 0);
    for (const InteractionRecord& rec : agent.memory) {
      feedback_sum[static_cast<std::size_t>(rec.partner)] += rec.feedback;
      feedback_count[static_cast<std::size_t>(rec.partner)] += 1;
    }
    for (std::size_t j = 0; j < un; ++j) {
      propensity[j] = feedback_count[j] == 0
                          ? 1.0
                          : 1.0 + coeffs.beta *
                                      std::max(0.0, feedback_sum[j] /
                                                        static_cast<double>(feedback_count[j]));
    }
    const std::vector<int> partners =
        select_partners(i, initiations_per_step(agent), state.graph, propensity, state.loop_rng);
    for (int j : partners) incoming[static_cast<std::size_t>(j)].push_back(i);
  }

  // (3) Cognitive load, (4) feedback on snapshot opinions. The interaction
  // list is ordered by receiver, then arrival.
  std::vector<Interaction> interactions;
  for (int j = 0; j < n; ++j) {
    const FilterResult fr =
        cognitive_filter(incoming[static_cast<std::size_t>(j)], coeffs.cognitive_capacity);
    state.agents[static_cast<std::size_t>(j)].overloaded = fr.overloaded;
    for (int i : fr.processed) {
      interactions.push_back(
          {i, j,
           trust_feedback(opinion_snap[static_cast<std::size_t>(i)],
                          opinion_snap[static_cast<std::size_t>(j)])});
    }
  }

  // (5) Synchronous opinion updates. Strategy and noise draws happen for
  // every agent regardless of peer count so the stream position is a pure
  // function of n.
  std::vector<double> new_opinion(un);
  std::vector<PeerOpinion> peers;
  for (int i = 0; i < n; ++i) {
    const AgentState& agent = state.agents[static_cast<std::size_t>(i)];
    peers.clear();
    for (const Interaction& e : interactions) {
      int other = -1;
      if (e.initiator == i) other = e.receiver;
      else if (e.receiver == i) other = e.initiator;
      if (other < 0) continue;
      peers.push_back({opinion_snap[static_cast<std::size_t>(other)], trust_snap(i, other)});
    }
    const double p_contr = coeffs.p_contrarian * (1.0 - agent.personality.agreeableness) *
                           agent.personality.openness;
    const OpinionStrategy strategy = state.loop_rng.uniform01() < p_contr
                                         ? OpinionStrategy::Contrarian
                                         : OpinionStrategy::Averaging;
    double alpha = coeffs.alpha_base * agent.personality.agreeableness;
    double sigma = coeffs.sigma_noise * (0.5 + agent.personality.neuroticism);
    if (agent.overloaded) {
      alpha *= 0.5;
      sigma *= 2.0;
    }
    const double noise = sigma * state.loop_rng.truncated_normal();
    new_opinion[static_cast<std::size_t>(i)] =
        update_opinion(opinion_snap[static_cast<std::size_t>(i)], peers, strategy, alpha, noise);
  }
  for (std::size_t i = 0; i < un; ++i) state.agents[i].opinion = new_opinion[i];

  // (6) Gated trust updates, initiator->receiver then receiver->initiator.
  // Gates read memory as it stood before this step's recordings.
  for (const Interaction& e : interactions) {
    state.trust(e.initiator, e.receiver) =
        update_trust(state.trust(e.initiator, e.receiver), e.feedback,
                     rational_gate(make_gate_context(state, e.initiator, e.receiver), coeffs),
                     coeffs.eta);
    state.trust(e.receiver, e.initiator) =
        update_trust(state.trust(e.receiver, e.initiator), e.feedback,
                     rational_gate(make_gate_context(state, e.receiver, e.initiator), coeffs),
                     coeffs.eta);
  }

  // (7) Memory. Records carry the snapshot index (iteration - 1): the
  // feedback was computed from that iteration's opinions.
  for (const Interaction& e : interactions) {
    record_and_learn(state.agents[static_cast<std::size_t>(e.initiator)].memory, e.receiver,
                     e.feedback, state.iteration - 1, coeffs);
    record_and_learn(state.agents[static_cast<std::size_t>(e.receiver)].memory, e.initiator,
                     e.feedback, state.iteration - 1, coeffs);
  }

  // (8) Emotions: one update per agent with all of its interaction stimuli.
  std::vector<Stimulus> stimuli;
  for (int i = 0; i < n; ++i) {
    stimuli.clear();
    for (const Interaction& e : interactions) {
      if (e.initiator != i && e.receiver != i) continue;
      for (const Stimulus& s : interaction_stimuli(e.feedback, coeffs.s_gain)) {
        stimuli.push_back(s);
      }
    }
    AgentState& agent = state.agents[static_cast<std::size_t>(i)];
    agent.emotions =
        update_emotions(agent.emotions, stimuli, coeffs, agent.personality.neuroticism);
  }

  // (9) Allocation from post-update opinions.
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd alloc =
        allocate_resources(state.agents[static_cast<std::size_t>(i)].opinion,
                           state.agents[static_cast<std::size_t>(i)].budget, state.urgency,
                           state.priorities.row(i).transpose(), coeffs.mu);
    state.last_allocation.col(i) = alloc;
    Eigen::Index top = 0;
    alloc.maxCoeff(&top);
    state.last_top_area[static_cast<std::size_t>(i)] = static_cast<int>(top);
  }

  // (10) Reputation.
  const std::vector<double> reps = compute_reputation(state.trust);
  for (std::size_t i = 0; i < un; ++i) state.agents[i].reputation = reps[i];
}

RunArtifacts run_simulation(const ScenarioConfig& cfg, const StepObserver& observer) {
  const std::vector<Violation> violations = validate_config(cfg);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const Violation& v : violations) msg << " [" << v.path << "] " << v.message << ";";
    throw std::invalid_argument(msg.str());
  }

  RunArtifacts artifacts;
  SimulationState state = init_state(cfg);
  for (const EventSpec& ev : cfg.events) {
    if (ev.iteration == 0) apply_event(state, ev);
  }

  const std::vector<long> trust_iters = effective_trust_snapshots(cfg);
  const std::vector<long> alloc_iters = effective_allocation_snapshots(cfg);
  MetricsLog& log = artifacts.log;
  auto record = [&](const SimulationState& s) {
    log.rows.push_back(compute_metrics(s));
    const bool want_trust =
        std::find(trust_iters.begin(), trust_iters.end(), s.iteration) != trust_iters.end();
    if (want_trust &&
        std::none_of(log.trust_snapshots.begin(), log.trust_snapshots.end(),
                     [&](const LabeledMatrix& m) { return m.iteration == s.iteration; })) {
      log.trust_snapshots.push_back({s.iteration, s.trust});
    }
    const bool want_alloc =
        std::find(alloc_iters.begin(), alloc_iters.end(), s.iteration) != alloc_iters.end();
    if (want_alloc &&
        std::none_of(log.allocation_snapshots.begin(), log.allocation_snapshots.end(),
                     [&](const LabeledMatrix& m) { return m.iteration == s.iteration; })) {
      log.allocation_snapshots.push_back({s.iteration, s.last_allocation});
    }
    if (observer) observer(s);
  };

  record(state);
  for (long t = 1; t <= cfg.total_iterations; ++t) {
    step(state);
    record(state);
  }
  artifacts.final_state = std::move(state);
  return artifacts;
}

}  // namespace trustsim

#pragma once

#include <functional>
#include <vector>

#include "trustsim/core.hpp"
#include "trustsim/metrics.hpp"
#include "trustsim/network.hpp"
#include "trustsim/rng.hpp"

namespace trustsim {

/// Full state of one run between iterations. Plain value; copying it copies
/// the RNG position, so a copied state replays identically.
struct SimulationState {
  ScenarioConfig config;  // as executed (effective seed already applied)
  long iteration = 0;
  Graph graph;
  std::vector<AgentState> agents;
  TrustMatrix trust;
  Eigen::MatrixXd priorities;  // n_agents x n_areas, static per run
  Eigen::VectorXd urgency;     // current urgency, events may replace it
  /// Allocation produced by the latest step, n_areas x n_agents; zero before
  /// the first step.
  Eigen::MatrixXd last_allocation;
  /// Area receiving each agent's largest share last step (first index wins
  /// ties); -1 before the first allocation. Drives the shared-benefit gate.
  std::vector<int> last_top_area;
  RandomStream loop_rng{0};
};

/// Builds iteration-0 state. Draw order (all from the "init" substream, one
/// uniform each, skipped entirely when an override pins the value):
/// per agent ascending — opinion; openness, conscientiousness, extraversion,
/// agreeableness, neuroticism; moral_integrity; the 8 emotion channels in
/// export order. Then trust row-major over i != j, then priorities row-major
/// (only when the config does not supply them). Topology generation uses the
/// separate "topology" substream; the step loop owns "loop".
SimulationState init_state(const ScenarioConfig& cfg);

/// Applies one scheduled event. Requires ev.iteration == state.iteration.
/// OpinionShock samples ceil(target_fraction * n) distinct agents via a
/// partial Fisher-Yates shuffle on the loop stream (one draw per sampled
/// agent); UrgencyShift replaces the urgency vector; TrustShock rescales all
/// off-diagonal trust entries. Any emotion stimuli are then applied to every
/// agent through update_emotions.
void apply_event(SimulationState& state, const EventSpec& ev);

/// One agent's allocation column: v_a = urgency_a * (1 + mu * opinion *
/// priority_a), allocation = budget * v / sum(v); uniform split when the
/// value vector sums to zero.
Eigen::VectorXd allocate_resources(double opinion, double budget,
                                   const Eigen::VectorXd& urgency,
                                   const Eigen::VectorXd& priorities_i, double mu);

/// Advances the state one iteration. Phase order (fixed):
///   (1) apply events scheduled for the new iteration, then freeze the
///       start-of-iteration opinion/trust snapshot all later phases read;
///   (2) partner selection per agent ascending (k_i = 1 + round(2 *
///       extraversion) weighted draws from the loop stream);
///   (3) cognitive_filter per receiver ascending; accepted requests become
///       the interaction list, ordered by receiver then arrival;
///   (4) feedback per interaction from snapshot opinions;
///   (5) synchronous opinion updates: per agent ascending, one strategy
///       uniform then one truncated normal are always drawn, even without
///       peers, so stream positions are auditable;
///   (6) trust updates in interaction order, initiator->receiver then
///       receiver->initiator, gated by rational_gate over pre-step memory;
///   (7) memory recording (records carry iteration - 1, the snapshot index);
///   (8) one update_emotions per agent with its accumulated stimuli;
///   (9) resource allocation from post-update opinions;
///   (10) reputation recomputation. The metrics hook (11) lives in
///   run_simulation. Same input state ⇒ bit-identical output state.
void step(SimulationState& state);

struct RunArtifacts {
  SimulationState final_state;
  MetricsLog log;
};

/// Called after the iteration-0 row and after every step's metrics row.
using StepObserver = std::function<void(const SimulationState&)>;

/// Validates, then runs total_iterations steps, recording one MetricsRow per
/// iteration (0-based, contiguous) and capturing trust/allocation snapshots
/// at their scheduled iterations. Events scheduled at iteration 0 are applied
/// before the first row. Throws std::invalid_argument when validation fails.
RunArtifacts run_simulation(const ScenarioConfig& cfg, const StepObserver& observer = {});

}  // namespace trustsim

#pragma once

#include <span>
#include <vector>

#include "trustsim/core.hpp"

namespace trustsim {

// Per-agent update rules. Everything here is a pure function over value
// inputs; the engine owns sequencing and randomness.

/// Inputs for deciding whether a trust increase is rationally licensed.
/// The five licensing predicates, in order: friendship, shared benefit,
/// moral integrity, monitoring, historical reliability.
struct GateContext {
  bool friendship_edge = false;
  /// Both agents directed their largest allocation share to the same area in
  /// the previous iteration (false before the first allocation).
  bool shared_area_last_step = false;
  double partner_integrity = 0.0;
  bool monitoring_enabled = false;
  bool partner_monitored = false;
  /// Records for this partner in the trustor's memory: how many carried
  /// strictly positive feedback, out of how many total.
  int positive_count = 0;
  int total_count = 0;
};

/// Gate factor applied to trust increases. 1.0 when any of predicates 1-4
/// holds; c_h when only historical reliability holds (a reliable history
/// licenses trust at reduced certainty); gamma_penalty when nothing does.
/// Decreases are never gated.
double rational_gate(const GateContext& ctx, const CoefficientSet& coeffs);

/// Signed alignment score in [-1,1]: 1 - 2*|o_i - o_j|.
double trust_feedback(double o_i, double o_j);

/// Gated trust update: increases scale by the gate, decreases do not.
/// Result clamped to [0,1].
double update_trust(double t_ij, double feedback, double gate, double eta);

enum class OpinionStrategy { Averaging, Contrarian, Stubborn };

struct PeerOpinion {
  double opinion = 0.0;
  double weight = 0.0;  // trust the updating agent places in this peer
};

/// One opinion update from the start-of-iteration snapshot. The peer mean m
/// is trust-weighted (unweighted if all weights are zero). Averaging moves
/// alpha of the way toward m, Contrarian moves away by the same magnitude,
/// Stubborn keeps position; noise is added before clamping. An empty peer
/// list degrades Averaging/Contrarian to Stubborn.
double update_opinion(double opinion, std::span<const PeerOpinion> peers,
                      OpinionStrategy strategy, double alpha, double noise);

/// Emotion step: every channel decays toward its baseline at rate lambda,
/// stimuli push their channel up and its Plutchik opposite down (scaled by
/// rho), and neuroticism amplifies all stimulus effects via G = 1 + nu * N.
EmotionVector update_emotions(const EmotionVector& emotions,
                              std::span<const Stimulus> stimuli,
                              const CoefficientSet& coeffs, double neuroticism);

/// Maps interaction feedback to emotion stimuli: positive feedback excites
/// joy and felt trust, negative feedback excites sadness and anger, neutral
/// feedback produces nothing.
std::vector<Stimulus> interaction_stimuli(double feedback, double s_gain);

struct FilterResult {
  std::vector<int> processed;  // first `capacity` requests, arrival order
  bool overloaded = false;
};

/// Caps the interactions an agent can process this step. When overloaded the
/// caller halves the agent's conformity weight and doubles its noise scale
/// for the step.
FilterResult cognitive_filter(std::span<const int> incoming, int capacity);

/// Appends an interaction record (evicting the oldest past memory_capacity)
/// and returns the partner's propensity multiplier computed from the updated
/// buffer.
double record_and_learn(std::deque<InteractionRecord>& memory, int partner,
                        double feedback, long iteration, const CoefficientSet& coeffs);

/// 1 + beta * max(0, mean feedback across records with this partner);
/// exactly 1 when no records mention the partner.
double propensity_multiplier(const std::deque<InteractionRecord>& memory, int partner,
                             double beta);

}  // namespace trustsim

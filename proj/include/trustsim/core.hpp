#pragma once

#include <Eigen/Dense>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace trustsim {

inline double clamp01(double x) {
  assert(std::isfinite(x));
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

// ---------------------------------------------------------------------------
// Emotions
// ---------------------------------------------------------------------------

inline constexpr int kEmotionCount = 8;

/// Channel order is fixed and identical in every export. EmotionChannel::Trust
/// is the felt emotion (exported as "trust_e"); it is a different quantity
/// from the relational trust matrix and the two are never aliased.
enum class EmotionChannel : int {
  Joy = 0,
  Trust,
  Fear,
  Surprise,
  Sadness,
  Disgust,
  Anger,
  Anticipation,
};

/// Per-agent emotion intensities, one entry per EmotionChannel, each in [0,1].
using EmotionVector = Eigen::Array<double, kEmotionCount, 1>;

inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "joy", "trust_e", "fear", "surprise", "sadness", "disgust", "anger", "anticipation"};

/// Opposite-pair wiring: (joy,sadness), (trust,disgust), (fear,anger),
/// (surprise,anticipation).
inline EmotionChannel opposite(EmotionChannel c) {
  switch (c) {
    case EmotionChannel::Joy: return EmotionChannel::Sadness;
    case EmotionChannel::Sadness: return EmotionChannel::Joy;
    case EmotionChannel::Trust: return EmotionChannel::Disgust;
    case EmotionChannel::Disgust: return EmotionChannel::Trust;
    case EmotionChannel::Fear: return EmotionChannel::Anger;
    case EmotionChannel::Anger: return EmotionChannel::Fear;
    case EmotionChannel::Surprise: return EmotionChannel::Anticipation;
    case EmotionChannel::Anticipation: return EmotionChannel::Surprise;
  }
  return c;  // unreachable
}

std::optional<EmotionChannel> parse_emotion_channel(std::string_view name);

// ---------------------------------------------------------------------------
// Agents
// ---------------------------------------------------------------------------

/// Big Five traits, each in [0,1], immutable for the lifetime of a run.
/// Conscientiousness is carried but currently drives no update rule; it is a
/// documented no-op hook.
struct Personality {
  double openness = 0.5;
  double conscientiousness = 0.5;
  double extraversion = 0.5;
  double agreeableness = 0.5;
  double neuroticism = 0.5;
};

struct InteractionRecord {
  int partner = 0;
  double feedback = 0.0;  // signed alignment score in [-1, 1]
  long iteration = 0;
};

struct AgentState {
  int id = 0;
  double opinion = 0.5;  // urgency-consensus position in [0,1]
  EmotionVector emotions = EmotionVector::Constant(0.5);
  Personality personality;
  double moral_integrity = 0.5;
  std::deque<InteractionRecord> memory;  // bounded FIFO, oldest evicted first
  double budget = 0.0;                   // resource units per iteration
  double reputation = 0.5;               // mean incoming trust
  bool overloaded = false;               // cognitive overload this iteration
};

/// Directed trust levels: entry (i,j) is the trust agent i places in agent j,
/// each off-diagonal entry in [0,1]. Diagonal entries are fixed at 1.0 and
/// excluded from every aggregate.
using TrustMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

struct CompleteTopology {};
struct PreferentialAttachment {
  int m = 2;  // edges attached by each newcomer; requires 1 <= m < n
};
struct TreeTopology {
  int branching = 2;
};
using Topology = std::variant<CompleteTopology, PreferentialAttachment, TreeTopology>;

struct Stimulus {
  EmotionChannel channel = EmotionChannel::Joy;
  double magnitude = 0.0;  // >= 0
};

/// Shift the opinions of ceil(target_fraction * n) agents by delta (clamped).
struct OpinionShock {
  double delta = 0.0;
  double target_fraction = 1.0;
};
/// Replace the current urgency vector verbatim.
struct UrgencyShift {
  Eigen::VectorXd urgency;
};
/// Scale every off-diagonal trust entry by factor (clamped).
struct TrustShock {
  double factor = 1.0;
};

struct EventSpec {
  long iteration = 0;
  std::variant<OpinionShock, UrgencyShift, TrustShock> payload;
  std::vector<Stimulus> emotion_stimuli;
  std::string label;  // annotation text for plots; defaults to the kind name
};

/// Every tunable introduced by the update rules. Ranges are enforced by
/// validate_config; defaults are documented in docs/config_reference.md.
struct CoefficientSet {
  double alpha_base = 0.3;     // conformity weight, [0,1]
  double p_contrarian = 0.3;   // contrarian strategy probability scale, [0,1]
  double eta = 0.05;           // trust learning rate, [0,1]
  double gamma_penalty = 0.0;  // ungated trust-gain factor, [0,1]
  double lambda = 0.05;        // emotion decay rate toward baseline, [0,1]
  double rho = 0.5;            // opposite-emotion coupling, [0,1]
  double nu = 0.5;             // neuroticism gain on stimuli, >= 0
  double sigma_noise = 0.01;   // opinion noise scale, >= 0
  double theta_m = 0.6;        // moral-integrity gate threshold, [0,1]
  double theta_h = 0.7;        // historical-reliability threshold, [0,1]
  int n_min = 3;               // minimum history count for the history gate
  double c_h = 0.5;            // history-certainty discount, [0,1]
  int cognitive_capacity = 5;  // interactions processed per step (C), >= 1
  int memory_capacity = 50;    // memory buffer bound (M), >= 1
  double beta = 1.0;           // learning propensity gain, >= 0
  double mu = 1.0;             // opinion-priority coupling in allocation, >= 0
  double s_gain = 0.1;         // feedback-to-stimulus gain, >= 0
  EmotionVector kappa_baseline = EmotionVector::Constant(0.5);  // decay targets
};

struct MonitoringSpec {
  bool enabled = false;
  std::vector<int> monitored_agents;
};

/// Optional initialisation overrides. When a value is present the usual
/// uniform draw for that quantity is skipped entirely (the init stream is not
/// consumed), keeping draw order auditable. Used mainly by property tests
/// that need pinned traits.
struct InitOverrides {
  std::optional<double> openness;
  std::optional<double> conscientiousness;
  std::optional<double> extraversion;
  std::optional<double> agreeableness;
  std::optional<double> neuroticism;
  std::optional<double> moral_integrity;
  std::optional<double> initial_opinion;
  std::optional<double> initial_trust;
};

struct ScenarioConfig {
  int n_agents = 20;
  int n_areas = 5;
  long total_iterations = 5000;
  Topology topology = PreferentialAttachment{2};
  Eigen::VectorXd base_urgency;  // n_areas non-negative weights
  /// Per-agent area priorities (n_agents x n_areas, weights >= 0). Absent:
  /// sampled uniformly on [0,1] from the init stream.
  std::optional<Eigen::MatrixXd> priorities;
  double budget = 10.0;  // resource units per agent per iteration
  CoefficientSet coefficients;
  std::vector<EventSpec> events;
  /// Iterations at which both a trust snapshot and an allocation snapshot are
  /// captured. The per-product lists below, when present, replace this list
  /// for their product only.
  std::vector<long> snapshot_iterations;
  std::optional<std::vector<long>> trust_snapshot_iterations;
  std::optional<std::vector<long>> allocation_snapshot_iterations;
  MonitoringSpec monitoring;
  InitOverrides overrides;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// One violated invariant. Violations are data, not faults: collecting them
/// is how `validate` reports problems one per line.
struct Violation {
  std::string path;     // e.g. "coefficients.eta"
  std::string message;  // e.g. "must be within [0,1] (got 1.5)"
};

/// Checks every declared invariant and returns all violations with field
/// paths; an empty list means the config is valid.
std::vector<Violation> validate_config(const ScenarioConfig& cfg);

/// Effective snapshot iteration lists after applying the per-product
/// overrides described on ScenarioConfig.
std::vector<long> effective_trust_snapshots(const ScenarioConfig& cfg);
std::vector<long> effective_allocation_snapshots(const ScenarioConfig& cfg);

std::string_view topology_kind_name(const Topology& t);
std::string_view event_kind_name(const EventSpec& ev);

}  // namespace trustsim

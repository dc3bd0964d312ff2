#include "trustsim/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace trustsim {

double rational_gate(const GateContext& ctx, const CoefficientSet& coeffs) {
  if (ctx.friendship_edge) return 1.0;
  if (ctx.shared_area_last_step) return 1.0;
  if (ctx.partner_integrity >= coeffs.theta_m) return 1.0;
  if (ctx.monitoring_enabled && ctx.partner_monitored) return 1.0;
  const bool history_ok =
      ctx.total_count >= coeffs.n_min &&
      static_cast<double>(ctx.positive_count) >=
          coeffs.theta_h * static_cast<double>(ctx.total_count);
  if (history_ok) return coeffs.c_h;
  return coeffs.gamma_penalty;
}

double trust_feedback(double o_i, double o_j) {
  return 1.0 - 2.0 * std::abs(o_i - o_j);
}

double update_trust(double t_ij, double feedback, double gate, double eta) {
  const double scale = feedback >= 0.0 ? gate : 1.0;
  return clamp01(t_ij + eta * feedback * scale);
}

double update_opinion(double opinion, std::span<const PeerOpinion> peers,
                      OpinionStrategy strategy, double alpha, double noise) {
  if (peers.empty() || strategy == OpinionStrategy::Stubborn) {
    return clamp01(opinion + noise);
  }
  double weight_sum = 0.0;
  double weighted = 0.0;
  for (const PeerOpinion& p : peers) {
    weight_sum += p.weight;
    weighted += p.weight * p.opinion;
  }
  double mean;
  if (weight_sum > 0.0) {
    mean = weighted / weight_sum;
  } else {
    // All-zero trust: fall back to the plain average so peers still matter.
    double total = 0.0;
    for (const PeerOpinion& p : peers) total += p.opinion;
    mean = total / static_cast<double>(peers.size());
  }
  double next;
  if (strategy == OpinionStrategy::Averaging) {
    next = (1.0 - alpha) * opinion + alpha * mean;
  } else {  // Contrarian: mirror the averaging displacement
    next = opinion - alpha * (mean - opinion);
  }
  return clamp01(next + noise);
}

EmotionVector update_emotions(const EmotionVector& emotions,
                              std::span<const Stimulus> stimuli,
                              const CoefficientSet& coeffs, double neuroticism) {
  const double gain = 1.0 + coeffs.nu * neuroticism;
  EmotionVector delta = EmotionVector::Zero();
  for (const Stimulus& s : stimuli) {
    const auto k = static_cast<int>(s.channel);
    const auto opp = static_cast<int>(opposite(s.channel));
    delta[k] += gain * s.magnitude;
    delta[opp] -= coeffs.rho * gain * s.magnitude;
  }
  EmotionVector next;
  for (int k = 0; k < kEmotionCount; ++k) {
    const double decay = coeffs.lambda * (coeffs.kappa_baseline[k] - emotions[k]);
    next[k] = clamp01(emotions[k] + decay + delta[k]);
  }
  return next;
}

std::vector<Stimulus> interaction_stimuli(double feedback, double s_gain) {
  std::vector<Stimulus> out;
  if (feedback > 0.0) {
    out.push_back({EmotionChannel::Joy, feedback * s_gain});
    out.push_back({EmotionChannel::Trust, feedback * s_gain});
  } else if (feedback < 0.0) {
    out.push_back({EmotionChannel::Sadness, -feedback * s_gain});
    out.push_back({EmotionChannel::Anger, -feedback * s_gain});
  }
  return out;
}

FilterResult cognitive_filter(std::span<const int> incoming, int capacity) {
  FilterResult result;
  const auto cap = static_cast<std::size_t>(std::max(capacity, 0));
  const std::size_t kept = std::min(incoming.size(), cap);
  result.processed.assign(incoming.begin(), incoming.begin() + static_cast<std::ptrdiff_t>(kept));
  result.overloaded = incoming.size() > cap;
  return result;
}

double record_and_learn(std::deque<InteractionRecord>& memory, int partner,
                        double feedback, long iteration, const CoefficientSet& coeffs) {
  memory.push_back({partner, feedback, iteration});
  while (memory.size() > static_cast<std::size_t>(coeffs.memory_capacity)) {
    memory.pop_front();
  }
  return propensity_multiplier(memory, partner, coeffs.beta);
}

double propensity_multiplier(const std::deque<InteractionRecord>& memory, int partner,
                             double beta) {
  double sum = 0.0;
  int count = 0;
  for (const InteractionRecord& rec : memory) {
    if (rec.partner == partner) {
      sum += rec.feedback;
      ++count;
    }
  }
  if (count == 0) return 1.0;
  return 1.0 + beta * std::max(0.0, sum / static_cast<double>(count));
}

}  // namespace trustsim

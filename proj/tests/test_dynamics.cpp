#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <deque>
#include <vector>

#include "trustsim/dynamics.hpp"
#include "trustsim/rng.hpp"

using namespace trustsim;
using doctest::Approx;

namespace {

GateContext closed_context() {
  GateContext ctx;
  ctx.friendship_edge = false;
  ctx.shared_area_last_step = false;
  ctx.partner_integrity = 0.0;
  ctx.monitoring_enabled = false;
  ctx.partner_monitored = false;
  ctx.positive_count = 0;
  ctx.total_count = 0;
  return ctx;
}

}  // namespace

TEST_CASE("rational_gate opens fully on any structural condition") {
  const CoefficientSet coeffs;  // theta_m=0.6 theta_h=0.7 n_min=3 c_h=0.5 gamma=0

  GateContext ctx = closed_context();
  CHECK(rational_gate(ctx, coeffs) == 0.0);

  SUBCASE("friendship") {
    ctx.friendship_edge = true;
    CHECK(rational_gate(ctx, coeffs) == 1.0);
  }
  SUBCASE("shared benefit") {
    ctx.shared_area_last_step = true;
    CHECK(rational_gate(ctx, coeffs) == 1.0);
  }
  SUBCASE("moral integrity at threshold") {
    ctx.partner_integrity = 0.6;
    CHECK(rational_gate(ctx, coeffs) == 1.0);
    ctx.partner_integrity = 0.59;
    CHECK(rational_gate(ctx, coeffs) == 0.0);
  }
  SUBCASE("monitoring requires both flags") {
    ctx.monitoring_enabled = true;
    CHECK(rational_gate(ctx, coeffs) == 0.0);
    ctx.partner_monitored = true;
    CHECK(rational_gate(ctx, coeffs) == 1.0);
    ctx.monitoring_enabled = false;
    CHECK(rational_gate(ctx, coeffs) == 0.0);
  }
}

TEST_CASE("rational_gate history condition yields the partial coefficient") {
  const CoefficientSet coeffs;
  GateContext ctx = closed_context();

  ctx.positive_count = 4;
  ctx.total_count = 5;  // 4 >= 0.7 * 5
  CHECK(rational_gate(ctx, coeffs) == 0.5);

  ctx.positive_count = 7;
  ctx.total_count = 10;  // exactly at the ratio threshold
  CHECK(rational_gate(ctx, coeffs) == 0.5);

  ctx.positive_count = 6;
  ctx.total_count = 10;
  CHECK(rational_gate(ctx, coeffs) == 0.0);

  ctx.positive_count = 2;
  ctx.total_count = 2;  // below n_min even though all positive
  CHECK(rational_gate(ctx, coeffs) == 0.0);
}

TEST_CASE("rational_gate falls back to the penalty coefficient") {
  CoefficientSet coeffs;
  coeffs.gamma_penalty = 0.25;
  CHECK(rational_gate(closed_context(), coeffs) == 0.25);
}

TEST_CASE("trust_feedback maps opinion distance onto [-1, 1]") {
  CHECK(trust_feedback(0.5, 0.5) == 1.0);
  CHECK(trust_feedback(0.2, 0.5) == 0.4);
  CHECK(trust_feedback(0.5, 0.2) == 0.4);
  CHECK(trust_feedback(0.0, 1.0) == -1.0);
  CHECK(trust_feedback(0.75, 0.25) == 0.0);
}

TEST_CASE("update_trust applies gated increments and clamps") {
  CHECK(update_trust(0.5, 0.4, 0.5, 0.05) == 0.51);
  CHECK(update_trust(0.99, 1.0, 1.0, 0.05) == 1.0);   // clamp high
  CHECK(update_trust(0.02, -1.0, 1.0, 0.05) == 0.0);  // clamp low
  CHECK(update_trust(0.5, 0.8, 0.0, 0.05) == 0.5);    // closed gate blocks gains
  CHECK(update_trust(0.5, -1.0, 0.0, 0.05) == 0.45);  // losses ignore the gate
  CHECK(update_trust(0.5, 0.0, 0.0, 0.05) == 0.5);
}

TEST_CASE("update_trust is monotone in feedback and gate-invariant on losses") {
  RandomStream rng(2024);
  for (int i = 0; i < 20000; ++i) {
    const double t = rng.uniform01();
    const double gate = rng.uniform01();
    const double eta = rng.uniform01();
    double f1 = rng.uniform01() * 2.0 - 1.0;
    double f2 = rng.uniform01() * 2.0 - 1.0;
    if (f1 > f2) std::swap(f1, f2);
    const double lo = update_trust(t, f1, gate, eta);
    const double hi = update_trust(t, f2, gate, eta);
    REQUIRE(lo <= hi);
    REQUIRE(lo >= 0.0);
    REQUIRE(hi <= 1.0);
    if (f1 < 0.0) {
      REQUIRE(update_trust(t, f1, 0.0, eta) == update_trust(t, f1, 1.0, eta));
    }
  }
}

TEST_CASE("update_opinion averaging and contrarian moves") {
  const std::array<PeerOpinion, 1> one{{{0.6, 1.0}}};
  CHECK(update_opinion(0.4, one, OpinionStrategy::Averaging, 0.5, 0.0) == 0.5);
  CHECK(update_opinion(0.4, one, OpinionStrategy::Contrarian, 0.5, 0.0) == Approx(0.3).epsilon(1e-12));
}

TEST_CASE("update_opinion weights the peer mean by trust") {
  const std::array<PeerOpinion, 2> peers{{{0.2, 1.0}, {0.8, 3.0}}};
  // weighted mean 0.65, averaging with alpha 0.2: 0.8*0.5 + 0.2*0.65
  CHECK(update_opinion(0.5, peers, OpinionStrategy::Averaging, 0.2, 0.0) == 0.53);
  // all-zero weights fall back to the unweighted mean 0.5
  const std::array<PeerOpinion, 2> zeroed{{{0.2, 0.0}, {0.8, 0.0}}};
  CHECK(update_opinion(0.0, zeroed, OpinionStrategy::Averaging, 1.0, 0.0) == 0.5);
}

TEST_CASE("update_opinion without peers only applies noise") {
  CHECK(update_opinion(0.5, {}, OpinionStrategy::Averaging, 1.0, 0.1) == 0.6);
  CHECK(update_opinion(0.5, {}, OpinionStrategy::Averaging, 1.0, 0.7) == 1.0);
  const std::array<PeerOpinion, 1> one{{{0.0, 1.0}}};
  CHECK(update_opinion(0.5, one, OpinionStrategy::Stubborn, 1.0, -0.2) == 0.3);
}

TEST_CASE("update_opinion identity when alpha and noise vanish") {
  RandomStream rng(7);
  const std::array<PeerOpinion, 2> peers{{{0.9, 1.0}, {0.1, 2.0}}};
  for (int i = 0; i < 1000; ++i) {
    const double o = rng.uniform01();
    CHECK(update_opinion(o, peers, OpinionStrategy::Averaging, 0.0, 0.0) == o);
    CHECK(update_opinion(o, peers, OpinionStrategy::Contrarian, 0.0, 0.0) == o);
  }
}

TEST_CASE("contrarian mirrors the averaging displacement") {
  RandomStream rng(99);
  for (int i = 0; i < 5000; ++i) {
    // Keep operands in a band where no clamping can occur.
    const double o = 0.35 + 0.3 * rng.uniform01();
    const double m = 0.35 + 0.3 * rng.uniform01();
    const double alpha = rng.uniform01();
    const std::array<PeerOpinion, 1> peers{{{m, 1.0}}};
    const double avg = update_opinion(o, peers, OpinionStrategy::Averaging, alpha, 0.0);
    const double con = update_opinion(o, peers, OpinionStrategy::Contrarian, alpha, 0.0);
    REQUIRE(avg + con == Approx(2.0 * o).epsilon(1e-12));
  }
}

TEST_CASE("update_opinion stays within bounds under fuzzing") {
  RandomStream rng(31337);
  for (int i = 0; i < 10000; ++i) {
    std::vector<PeerOpinion> peers(rng.uniform_below(4));
    for (PeerOpinion& p : peers) {
      p.opinion = rng.uniform01();
      p.weight = rng.uniform01();
    }
    const double o = rng.uniform01();
    const double alpha = rng.uniform01();
    const double noise = rng.normal() * 0.2;
    const auto strategy = static_cast<OpinionStrategy>(rng.uniform_below(3));
    const double next = update_opinion(o, peers, strategy, alpha, noise);
    REQUIRE(next >= 0.0);
    REQUIRE(next <= 1.0);
  }
}

TEST_CASE("update_emotions decays toward the baseline") {
  CoefficientSet coeffs;  // lambda = 0.05, baseline 0.5
  EmotionVector e = EmotionVector::Zero();
  e[0] = 1.0;

  SUBCASE("zero baseline pulls down") {
    coeffs.kappa_baseline = EmotionVector::Zero();
    const EmotionVector next = update_emotions(e, {}, coeffs, 0.0);
    CHECK(next[0] == 0.95);
    CHECK(next[1] == 0.0);
  }
  SUBCASE("default baseline pulls up") {
    EmotionVector low = EmotionVector::Constant(0.2);
    const EmotionVector next = update_emotions(low, {}, coeffs, 0.0);
    for (int k = 0; k < kEmotionCount; ++k) CHECK(next[k] == Approx(0.215).epsilon(1e-12));
  }
  SUBCASE("baseline is a fixed point") {
    const EmotionVector next = update_emotions(coeffs.kappa_baseline, {}, coeffs, 0.7);
    for (int k = 0; k < kEmotionCount; ++k) CHECK(next[k] == coeffs.kappa_baseline[k]);
  }
}

TEST_CASE("update_emotions applies stimuli with opposite-channel coupling") {
  CoefficientSet coeffs;
  coeffs.lambda = 0.0;  // isolate the stimulus path
  EmotionVector e = EmotionVector::Constant(0.5);

  const std::array<Stimulus, 1> joy{{{EmotionChannel::Joy, 0.4}}};
  EmotionVector next = update_emotions(e, joy, coeffs, 0.0);
  CHECK(next[0] == 0.9);   // +0.4
  CHECK(next[4] == 0.3);   // sadness -rho*0.4
  for (const int k : {1, 2, 3, 5, 6, 7}) CHECK(next[k] == 0.5);

  // Neuroticism amplifies stimuli: gain = 1 + 0.5*1 = 1.5.
  const std::array<Stimulus, 1> fear{{{EmotionChannel::Fear, 0.2}}};
  next = update_emotions(e, fear, coeffs, 1.0);
  CHECK(next[2] == 0.8);
  CHECK(next[6] == 0.35);
}

TEST_CASE("update_emotions accumulates multiple stimuli and clamps") {
  CoefficientSet coeffs;
  coeffs.lambda = 0.0;
  EmotionVector e = EmotionVector::Constant(0.5);
  const std::array<Stimulus, 2> both{{{EmotionChannel::Joy, 0.4}, {EmotionChannel::Joy, 0.4}}};
  const EmotionVector next = update_emotions(e, both, coeffs, 0.0);
  CHECK(next[0] == 1.0);  // 0.5 + 0.8 clamped
  CHECK(next[4] == Approx(0.1).epsilon(1e-12));  // 0.5 - 2*0.2
}

TEST_CASE("update_emotions stays within bounds under fuzzing") {
  RandomStream rng(555);
  CoefficientSet coeffs;
  for (int i = 0; i < 5000; ++i) {
    EmotionVector e;
    for (int k = 0; k < kEmotionCount; ++k) e[k] = rng.uniform01();
    coeffs.lambda = rng.uniform01();
    coeffs.rho = rng.uniform01();
    coeffs.nu = rng.uniform01();
    std::vector<Stimulus> stimuli(rng.uniform_below(4));
    for (Stimulus& s : stimuli) {
      s.channel = static_cast<EmotionChannel>(rng.uniform_below(8));
      s.magnitude = rng.uniform01();
    }
    const EmotionVector next = update_emotions(e, stimuli, coeffs, rng.uniform01());
    for (int k = 0; k < kEmotionCount; ++k) {
      REQUIRE(next[k] >= 0.0);
      REQUIRE(next[k] <= 1.0);
    }
  }
}

TEST_CASE("interaction_stimuli routes feedback by sign") {
  const auto pos = interaction_stimuli(0.5, 0.1);
  REQUIRE(pos.size() == 2);
  CHECK(pos[0].channel == EmotionChannel::Joy);
  CHECK(pos[0].magnitude == 0.05);
  CHECK(pos[1].channel == EmotionChannel::Trust);
  CHECK(pos[1].magnitude == 0.05);

  const auto neg = interaction_stimuli(-0.8, 0.1);
  REQUIRE(neg.size() == 2);
  CHECK(neg[0].channel == EmotionChannel::Sadness);
  CHECK(neg[0].magnitude == Approx(0.08).epsilon(1e-12));
  CHECK(neg[1].channel == EmotionChannel::Anger);
  CHECK(neg[1].magnitude == Approx(0.08).epsilon(1e-12));

  CHECK(interaction_stimuli(0.0,  0.1).empty());
}

TEST_CASE("cognitive_filter keeps the earliest arrivals") {
  const std::array<int, 4> arrivals{7, 3, 9, 1};

  auto r = cognitive_filter(arrivals, 2);
  CHECK(r.processed == std::vector<int>{7, 3});
  CHECK(r.overloaded);

  r = cognitive_filter(arrivals, 4);
  CHECK(r.processed == std::vector<int>{7, 3, 9, 1});
  CHECK_FALSE(r.overloaded);

  r = cognitive_filter(arrivals, 5);
  CHECK(r.processed.size() == 4);
  CHECK_FALSE(r.overloaded);

  r = cognitive_filter(arrivals, 0);
  CHECK(r.processed.empty());
  CHECK(r.overloaded);

  r = cognitive_filter({}, 3);
  CHECK(r.processed.empty());
  CHECK_FALSE(r.overloaded);
}

TEST_CASE("propensity_multiplier averages per-partner feedback") {
  std::deque<InteractionRecord> memory;
  CHECK(propensity_multiplier(memory, 0, 1.0) == 1.0);  // no history

  memory.push_back({1, 0.3, 0});
  memory.push_back({2, -1.0, 0});
  memory.push_back({1, 0.5, 1});
  CHECK(propensity_multiplier(memory, 1, 1.0) == 1.4);
  CHECK(propensity_multiplier(memory, 2, 1.0) == 1.0);  // negative mean floors at 1
  CHECK(propensity_multiplier(memory, 3, 1.0) == 1.0);

  std::deque<InteractionRecord> single{{4, 0.25, 0}};
  CHECK(propensity_multiplier(single, 4, 2.0) == 1.5);
}

TEST_CASE("record_and_learn evicts the oldest entries first") {
  CoefficientSet coeffs;
  coeffs.memory_capacity = 3;
  coeffs.beta = 1.0;
  std::deque<InteractionRecord> memory;

  record_and_learn(memory, 1, 0.1, 0, coeffs);
  record_and_learn(memory, 2, 0.2, 1, coeffs);
  record_and_learn(memory, 3, 0.3, 2, coeffs);
  const double prop = record_and_learn(memory, 4, 0.4, 3, coeffs);

  REQUIRE(memory.size() == 3);
  CHECK(memory[0].partner == 2);
  CHECK(memory[1].partner == 3);
  CHECK(memory[2].partner == 4);
  CHECK(memory[2].feedback == 0.4);
  CHECK(memory[2].iteration == 3);
  CHECK(prop == 1.4);  // only the new record mentions partner 4
  CHECK(prop == propensity_multiplier(memory, 4, coeffs.beta));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "trustsim/config_io.hpp"
#include "trustsim/core.hpp"

using namespace trustsim;

namespace {

// Mirrors scenarios/disaster.json.
ScenarioConfig disaster_config() {
  ScenarioConfig cfg;
  cfg.n_agents = 20;
  cfg.n_areas = 5;
  cfg.total_iterations = 5000;
  cfg.topology = PreferentialAttachment{2};
  cfg.base_urgency = Eigen::VectorXd(5);
  cfg.base_urgency << 5, 4, 3, 2, 1;
  cfg.budget = 10.0;

  EventSpec news;
  news.iteration = 2500;
  news.payload = OpinionShock{0.15, 0.5};
  news.emotion_stimuli = {{EmotionChannel::Fear, 0.3}, {EmotionChannel::Surprise, 0.3}};
  news.label = "News Event";
  EventSpec env;
  env.iteration = 4000;
  Eigen::VectorXd rotated(5);
  rotated << 1, 5, 4, 3, 2;
  env.payload = UrgencyShift{rotated};
  env.emotion_stimuli = {{EmotionChannel::Anticipation, 0.3}};
  env.label = "Environmental Change";
  cfg.events = {news, env};

  cfg.trust_snapshot_iterations = std::vector<long>{750};
  cfg.allocation_snapshot_iterations = std::vector<long>{4000};
  cfg.seed = 42;
  return cfg;
}

bool has_violation(const std::vector<Violation>& vs, const std::string& path) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.path == path; });
}

}  // namespace

TEST_CASE("clamp01") {
  CHECK(clamp01(0.7) == 0.7);
  CHECK(clamp01(-0.2) == 0.0);
  CHECK(clamp01(1.3) == 1.0);
  CHECK(clamp01(0.0) == 0.0);
  CHECK(clamp01(1.0) == 1.0);
}

TEST_CASE("emotion channel order and names are fixed") {
  CHECK(static_cast<int>(EmotionChannel::Joy) == 0);
  CHECK(static_cast<int>(EmotionChannel::Trust) == 1);
  CHECK(static_cast<int>(EmotionChannel::Fear) == 2);
  CHECK(static_cast<int>(EmotionChannel::Surprise) == 3);
  CHECK(static_cast<int>(EmotionChannel::Sadness) == 4);
  CHECK(static_cast<int>(EmotionChannel::Disgust) == 5);
  CHECK(static_cast<int>(EmotionChannel::Anger) == 6);
  CHECK(static_cast<int>(EmotionChannel::Anticipation) == 7);
  CHECK(kEmotionNames[0] == "joy");
  CHECK(kEmotionNames[1] == "trust_e");
  CHECK(kEmotionNames[7] == "anticipation");
}

TEST_CASE("plutchik opposites pair up and are involutive") {
  CHECK(opposite(EmotionChannel::Joy) == EmotionChannel::Sadness);
  CHECK(opposite(EmotionChannel::Trust) == EmotionChannel::Disgust);
  CHECK(opposite(EmotionChannel::Fear) == EmotionChannel::Anger);
  CHECK(opposite(EmotionChannel::Surprise) == EmotionChannel::Anticipation);
  for (int k = 0; k < kEmotionCount; ++k) {
    const auto c = static_cast<EmotionChannel>(k);
    CHECK(opposite(opposite(c)) == c);
    CHECK(opposite(c) != c);
  }
}

TEST_CASE("parse_emotion_channel") {
  for (int k = 0; k < kEmotionCount; ++k) {
    const auto parsed = parse_emotion_channel(kEmotionNames[static_cast<std::size_t>(k)]);
    REQUIRE(parsed.has_value());
    CHECK(static_cast<int>(*parsed) == k);
  }
  CHECK_FALSE(parse_emotion_channel("zeal").has_value());
  CHECK_FALSE(parse_emotion_channel("trust").has_value());  // emotion channel is "trust_e"
}

TEST_CASE("validate_config accepts the disaster scenario") {
  const auto violations = validate_config(disaster_config());
  for (const Violation& v : violations) {
    CAPTURE(v.path);
    CAPTURE(v.message);
  }
  CHECK(violations.empty());
}

TEST_CASE("validate_config flags out-of-range eta") {
  ScenarioConfig cfg = disaster_config();
  cfg.coefficients.eta = 1.5;
  const auto violations = validate_config(cfg);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].path == "coefficients.eta");
}

TEST_CASE("validate_config flags non-positive n_agents") {
  ScenarioConfig cfg = disaster_config();
  cfg.n_agents = 0;
  const auto violations = validate_config(cfg);
  CHECK(has_violation(violations, "n_agents"));
  // n = 0 also invalidates PA m < n and monitored ids, but n_agents must be named.
}

TEST_CASE("validate_config covers the remaining invariants") {
  SUBCASE("pa m too large") {
    ScenarioConfig cfg = disaster_config();
    cfg.topology = PreferentialAttachment{20};
    CHECK(has_violation(validate_config(cfg), "topology.m"));
  }
  SUBCASE("pa m below one") {
    ScenarioConfig cfg = disaster_config();
    cfg.topology = PreferentialAttachment{0};
    CHECK(has_violation(validate_config(cfg), "topology.m"));
  }
  SUBCASE("tree branching below one") {
    ScenarioConfig cfg = disaster_config();
    cfg.topology = TreeTopology{0};
    CHECK(has_violation(validate_config(cfg), "topology.branching"));
  }
  SUBCASE("urgency size mismatch") {
    ScenarioConfig cfg = disaster_config();
    cfg.base_urgency = Eigen::VectorXd::Ones(3);
    CHECK(has_violation(validate_config(cfg), "base_urgency"));
  }
  SUBCASE("negative urgency entry") {
    ScenarioConfig cfg = disaster_config();
    cfg.base_urgency(2) = -1.0;
    CHECK(has_violation(validate_config(cfg), "base_urgency[2]"));
  }
  SUBCASE("priorities dimensions") {
    ScenarioConfig cfg = disaster_config();
    cfg.priorities = Eigen::MatrixXd::Ones(3, 5);
    CHECK(has_violation(validate_config(cfg), "priorities"));
  }
  SUBCASE("negative priority entry") {
    ScenarioConfig cfg = disaster_config();
    cfg.priorities = Eigen::MatrixXd::Ones(20, 5);
    (*cfg.priorities)(4, 2) = -0.5;
    CHECK(has_violation(validate_config(cfg), "priorities[4][2]"));
  }
  SUBCASE("negative budget") {
    ScenarioConfig cfg = disaster_config();
    cfg.budget = -1.0;
    CHECK(has_violation(validate_config(cfg), "budget"));
  }
  SUBCASE("kappa baseline out of range") {
    ScenarioConfig cfg = disaster_config();
    cfg.coefficients.kappa_baseline(2) = 1.2;
    CHECK(has_violation(validate_config(cfg), "coefficients.kappa_baseline.fear"));
  }
  SUBCASE("n_min below one") {
    ScenarioConfig cfg = disaster_config();
    cfg.coefficients.n_min = 0;
    CHECK(has_violation(validate_config(cfg), "coefficients.n_min"));
  }
  SUBCASE("capacities below one") {
    ScenarioConfig cfg = disaster_config();
    cfg.coefficients.cognitive_capacity = 0;
    cfg.coefficients.memory_capacity = 0;
    const auto vs = validate_config(cfg);
    CHECK(has_violation(vs, "coefficients.cognitive_capacity"));
    CHECK(has_violation(vs, "coefficients.memory_capacity"));
  }
  SUBCASE("event iteration past the run") {
    ScenarioConfig cfg = disaster_config();
    cfg.events[0].iteration = 5001;
    CHECK(has_violation(validate_config(cfg), "events[0].iteration"));
  }
  SUBCASE("event target fraction above one") {
    ScenarioConfig cfg = disaster_config();
    cfg.events[0].payload = OpinionShock{0.1, 1.5};
    CHECK(has_violation(validate_config(cfg), "events[0].target_fraction"));
  }
  SUBCASE("urgency shift size mismatch") {
    ScenarioConfig cfg = disaster_config();
    cfg.events[1].payload = UrgencyShift{Eigen::VectorXd::Ones(2)};
    CHECK(has_violation(validate_config(cfg), "events[1].urgency"));
  }
  SUBCASE("negative stimulus magnitude") {
    ScenarioConfig cfg = disaster_config();
    cfg.events[0].emotion_stimuli[0].magnitude = -0.1;
    CHECK(has_violation(validate_config(cfg), "events[0].emotion_stimuli[0].magnitude"));
  }
  SUBCASE("snapshot iteration past the run") {
    ScenarioConfig cfg = disaster_config();
    cfg.snapshot_iterations = {6000};
    CHECK(has_violation(validate_config(cfg), "snapshot_iterations[0]"));
  }
  SUBCASE("per-product snapshot iteration past the run") {
    ScenarioConfig cfg = disaster_config();
    cfg.trust_snapshot_iterations = std::vector<long>{-1};
    CHECK(has_violation(validate_config(cfg), "trust_snapshot_iterations[0]"));
  }
  SUBCASE("monitored agent out of range") {
    ScenarioConfig cfg = disaster_config();
    cfg.monitoring.enabled = true;
    cfg.monitoring.monitored_agents = {20};
    CHECK(has_violation(validate_config(cfg), "monitoring.monitored_agents[0]"));
  }
  SUBCASE("override out of range") {
    ScenarioConfig cfg = disaster_config();
    cfg.overrides.agreeableness = 1.5;
    CHECK(has_violation(validate_config(cfg), "overrides.agreeableness"));
  }
  SUBCASE("zero total_iterations is a valid empty run") {
    ScenarioConfig cfg = disaster_config();
    cfg.total_iterations = 0;
    cfg.events.clear();
    cfg.trust_snapshot_iterations.reset();
    cfg.allocation_snapshot_iterations.reset();
    CHECK(validate_config(cfg).empty());
  }
}

TEST_CASE("effective snapshot lists apply per-product overrides") {
  ScenarioConfig cfg;
  cfg.snapshot_iterations = {10, 20};
  CHECK(effective_trust_snapshots(cfg) == std::vector<long>{10, 20});
  CHECK(effective_allocation_snapshots(cfg) == std::vector<long>{10, 20});
  cfg.trust_snapshot_iterations = std::vector<long>{5};
  CHECK(effective_trust_snapshots(cfg) == std::vector<long>{5});
  CHECK(effective_allocation_snapshots(cfg) == std::vector<long>{10, 20});
  cfg.allocation_snapshot_iterations = std::vector<long>{};
  CHECK(effective_allocation_snapshots(cfg).empty());
}

TEST_CASE("kind names") {
  CHECK(topology_kind_name(CompleteTopology{}) == "complete");
  CHECK(topology_kind_name(PreferentialAttachment{3}) == "preferential_attachment");
  CHECK(topology_kind_name(TreeTopology{2}) == "tree");
  EventSpec ev;
  ev.payload = OpinionShock{};
  CHECK(event_kind_name(ev) == "opinion_shock");
  ev.payload = UrgencyShift{};
  CHECK(event_kind_name(ev) == "urgency_shift");
  ev.payload = TrustShock{};
  CHECK(event_kind_name(ev) == "trust_shock");
}

TEST_CASE("config json round-trip preserves every field") {
  ScenarioConfig cfg = disaster_config();
  cfg.priorities = Eigen::MatrixXd::Constant(20, 5, 0.25);
  (*cfg.priorities)(3, 4) = 0.75;
  cfg.monitoring.enabled = true;
  cfg.monitoring.monitored_agents = {1, 4};
  cfg.overrides.neuroticism = 0.25;
  cfg.overrides.initial_trust = 0.5;
  cfg.snapshot_iterations = {100};
  cfg.coefficients.kappa_baseline(6) = 0.3;
  cfg.coefficients.n_min = 4;

  const ScenarioConfig back = config_from_json(config_to_json(cfg));
  CHECK(back.n_agents == cfg.n_agents);
  CHECK(back.n_areas == cfg.n_areas);
  CHECK(back.total_iterations == cfg.total_iterations);
  REQUIRE(std::holds_alternative<PreferentialAttachment>(back.topology));
  CHECK(std::get<PreferentialAttachment>(back.topology).m == 2);
  CHECK(back.base_urgency == cfg.base_urgency);
  REQUIRE(back.priorities.has_value());
  CHECK(*back.priorities == *cfg.priorities);
  CHECK(back.budget == cfg.budget);
  CHECK(back.coefficients.eta == cfg.coefficients.eta);
  CHECK(back.coefficients.n_min == 4);
  CHECK(back.coefficients.kappa_baseline(6) == 0.3);
  REQUIRE(back.events.size() == 2);
  CHECK(back.events[0].iteration == 2500);
  REQUIRE(std::holds_alternative<OpinionShock>(back.events[0].payload));
  CHECK(std::get<OpinionShock>(back.events[0].payload).delta == 0.15);
  CHECK(std::get<OpinionShock>(back.events[0].payload).target_fraction == 0.5);
  REQUIRE(back.events[0].emotion_stimuli.size() == 2);
  CHECK(back.events[0].emotion_stimuli[0].channel == EmotionChannel::Fear);
  CHECK(back.events[0].emotion_stimuli[0].magnitude == 0.3);
  CHECK(back.events[0].label == "News Event");
  REQUIRE(std::holds_alternative<UrgencyShift>(back.events[1].payload));
  CHECK(std::get<UrgencyShift>(back.events[1].payload).urgency ==
        std::get<UrgencyShift>(cfg.events[1].payload).urgency);
  CHECK(back.snapshot_iterations == cfg.snapshot_iterations);
  REQUIRE(back.trust_snapshot_iterations.has_value());
  CHECK(*back.trust_snapshot_iterations == std::vector<long>{750});
  REQUIRE(back.allocation_snapshot_iterations.has_value());
  CHECK(*back.allocation_snapshot_iterations == std::vector<long>{4000});
  CHECK(back.monitoring.enabled);
  CHECK(back.monitoring.monitored_agents == std::vector<int>{1, 4});
  CHECK(back.overrides.neuroticism == 0.25);
  CHECK(back.overrides.initial_trust == 0.5);
  CHECK_FALSE(back.overrides.openness.has_value());
  CHECK(back.seed == 42);
}

TEST_CASE("config parsing rejects unknown fields at every level") {
  auto expect_reject = [](const char* text) {
    CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(text)), ConfigParseError);
  };
  expect_reject(R"({"n_agnets": 3})");
  expect_reject(R"({"coefficients": {"etaa": 0.1}})");
  expect_reject(R"({"topology": {"kind": "complete", "m": 2}})");
  expect_reject(R"({"topology": {"kind": "ring"}})");
  expect_reject(R"({"events": [{"kind": "opinion_shock", "strength": 2}]})");
  expect_reject(R"({"events": [{"kind": "meteor"}]})");
  expect_reject(
      R"({"events": [{"kind": "trust_shock", "emotion_stimuli": [{"channel": "joy", "size": 1}]}]})");
  expect_reject(
      R"({"events": [{"kind": "trust_shock", "emotion_stimuli": [{"channel": "zeal"}]}]})");
  expect_reject(R"({"monitoring": {"enabled": true, "agents": []}})");
  expect_reject(R"({"overrides": {"charisma": 0.5}})");
  expect_reject(R"({"seed": "forty-two"})");
  expect_reject(R"({"priorities": [[0.1, 0.2], [0.3]]})");
  expect_reject(R"({"events": [{"kind": "urgency_shift"}]})");  // urgency required
}

TEST_CASE("config parsing applies defaults for absent fields") {
  const ScenarioConfig cfg = config_from_json(nlohmann::json::parse("{}"));
  CHECK(cfg.n_agents == 20);
  CHECK(cfg.n_areas == 5);
  CHECK(cfg.total_iterations == 5000);
  CHECK(std::holds_alternative<PreferentialAttachment>(cfg.topology));
  CHECK(cfg.base_urgency.size() == 5);
  CHECK(cfg.base_urgency == Eigen::VectorXd::Ones(5));
  CHECK_FALSE(cfg.priorities.has_value());
  CHECK(cfg.budget == 10.0);
  CHECK(cfg.coefficients.eta == 0.05);
  CHECK(cfg.coefficients.lambda == 0.05);
  CHECK(cfg.coefficients.rho == 0.5);
  CHECK(cfg.coefficients.nu == 0.5);
  CHECK(cfg.coefficients.s_gain == 0.1);
  CHECK(cfg.coefficients.gamma_penalty == 0.0);
  CHECK(cfg.coefficients.c_h == 0.5);
  CHECK(cfg.coefficients.theta_m == 0.6);
  CHECK(cfg.coefficients.theta_h == 0.7);
  CHECK(cfg.coefficients.n_min == 3);
  CHECK(cfg.coefficients.cognitive_capacity == 5);
  CHECK(cfg.coefficients.memory_capacity == 50);
  CHECK(cfg.coefficients.beta == 1.0);
  CHECK(cfg.coefficients.sigma_noise == 0.01);
  CHECK(cfg.events.empty());
  CHECK(cfg.seed == 0);
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "pco/analysis.hpp"
#include "pco/engine.hpp"
#include "pco/errors.hpp"
#include "pco/prc.hpp"
#include "pco/random.hpp"
#include "pco/trajectory_io.hpp"

using namespace pco;

namespace {

SimulationConfig make_config(std::size_t n, Direction d, double l, PhaseState x0, PrcSpec prc = {}) {
  return SimulationConfig{.topology = CycleTopology(n, d, l),
                          .prc = std::move(prc),
                          .w = NaturalFrequency(kTwoPi),
                          .initial = std::move(x0)};
}

PhaseState random_phases(SplitMix64& rng, std::size_t n) {
  std::vector<double> p(n);
  for (double& v : p) v = rng.uniform(0.0, kTwoPi);
  return make_state(std::move(p));
}

}  // namespace

TEST_CASE("next fire time") {
  CHECK(next_fire_time(make_state({0, 0, 0, 0}), kTwoPi) == doctest::Approx(1.0));
  CHECK(next_fire_time(make_state({0, kPi, 1, 2}), kTwoPi) == doctest::Approx(0.5));
  const double dt = next_fire_time(make_state({0, kTwoPi - 1e-8, 1, 2}), kTwoPi);
  CHECK(dt > 0.0);
  CHECK(dt < 1e-8);
  CHECK_THROWS_AS(next_fire_time(make_state({0, kTwoPi, 1, 2}), kTwoPi), PreconditionError);
}

TEST_CASE("flow is a rigid rotation") {
  const auto x = flow(make_state({0.0, kPi, 0.5, 1.0}), 0.5, kTwoPi);
  CHECK(x.phases[0] == doctest::Approx(kPi));
  CHECK(x.phases[1] == doctest::Approx(kTwoPi));
  CHECK(x.t == 0.5);
  CHECK(x.j == 0);
  const auto same = flow(x, 0.0, kTwoPi);
  CHECK(same.phases == x.phases);
  CHECK_THROWS_AS(flow(make_state({0.0, kPi, 0.5, 1.0}), 0.6, kTwoPi), InvariantViolation);
}

TEST_CASE("flow leaves the distance vector unchanged") {
  SplitMix64 rng(4);
  for (int k = 0; k < 1000; ++k) {
    const auto x = random_phases(rng, 4 + rng.below(13));
    const double dt = rng.uniform() * next_fire_time(x, kTwoPi);
    const auto a = distance_vector(x).components;
    const auto b = distance_vector(flow(x, dt, kTwoPi)).components;
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("single firing with partial coupling is one jump") {
  const CycleTopology ring(4, Direction::Bidirectional, 0.4);
  const auto r = resolve_cascade(make_state({kTwoPi, 2.0, 3.0, 4.0}), ring, PrcSpec());
  CHECK(r.fired == std::vector<NodeIndex>{0});
  CHECK(r.state.j == 1);
}

TEST_CASE("absorption cascade on a unidirectional ring") {
  const CycleTopology ring(4, Direction::Unidirectional, 1.0);
  const auto r = resolve_cascade(make_state({kTwoPi, 1.5 * kPi, 1.5 * kPi, 1.0}), ring, PrcSpec());
  CHECK(r.fired == std::vector<NodeIndex>{0, 1, 2});
  CHECK(r.state.j == 3);
  // Node 4 hears node 3 and is pulled back to zero: 1 + (-1).
  CHECK(r.state.phases == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("everyone at threshold fires exactly once") {
  for (Direction d : {Direction::Unidirectional, Direction::Bidirectional}) {
    for (CascadeOrder o : {CascadeOrder::Ascending, CascadeOrder::Descending}) {
      const CycleTopology ring(6, d, 0.7);
      const auto r = resolve_cascade(make_state(std::vector<double>(6, kTwoPi)), ring, PrcSpec(), o);
      CHECK(r.fired.size() == 6);
      for (double v : r.state.phases) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("descending order reverses a batch") {
  const CycleTopology ring(6, Direction::Unidirectional, 0.2);
  const auto x = make_state({kTwoPi, 1.0, 1.0, kTwoPi, 1.0, 1.0});
  CHECK(resolve_cascade(x, ring, PrcSpec(), CascadeOrder::Ascending).fired == std::vector<NodeIndex>{0, 3});
  CHECK(resolve_cascade(x, ring, PrcSpec(), CascadeOrder::Descending).fired == std::vector<NodeIndex>{3, 0});
}

TEST_CASE("cascade without a firing node is rejected") {
  const CycleTopology ring(4, Direction::Unidirectional, 0.5);
  CHECK_THROWS_AS(resolve_cascade(make_state({1, 1, 1, 1}), ring, PrcSpec()), PreconditionError);
}

TEST_CASE("bidirectional dichotomy around the critical coupling") {
  const auto x0 = worst_case_state(8, 0.8377, WorstCase::BiUbar);
  const auto below = run(make_config(8, Direction::Bidirectional, 0.8377, x0));
  CHECK(below.verdict == Verdict::ClusteredEquilibrium);
  CHECK_FALSE(below.t_sync);
  const auto above = run(make_config(8, Direction::Bidirectional, 0.8378, x0));
  CHECK(above.verdict == Verdict::Synchronized);
  REQUIRE(above.t_sync);
  CHECK(distance_vector(above.final_state).max() < 1e-6);
}

TEST_CASE("refractory node rescues full coupling from the uniform state") {
  const auto x0 = worst_case_state(8, 1.0, WorstCase::UniU2uniform);
  const auto plain = run(make_config(8, Direction::Unidirectional, 1.0, x0));
  CHECK(plain.verdict == Verdict::ClusteredEquilibrium);
  REQUIRE(plain.period_jumps);
  CHECK(*plain.period_jumps % 8 == 0);

  const auto rescued =
      run(make_config(8, Direction::Unidirectional, 1.0, x0, PrcSpec().with_refractory(8, 0, kPi)));
  CHECK(rescued.verdict == Verdict::Synchronized);
  REQUIRE(rescued.t_sync);
  CHECK(std::isfinite(*rescued.t_sync));
  CHECK(distance_vector(rescued.final_state).max() == 0.0);
}

TEST_CASE("horizon stops a run") {
  SplitMix64 rng(9);
  auto config = make_config(8, Direction::Bidirectional, 0.01, random_phases(rng, 8));
  config.horizon.rounds = 2;
  const auto out = run(config);
  CHECK(out.verdict == Verdict::HorizonExhausted);
  CHECK(out.final_state.j >= 16);
  CHECK(out.final_state.j <= 16 + 8);

  config.horizon = Horizon{.rounds = 1000, .max_time = 0.75};
  const auto timed = run(config);
  CHECK(timed.verdict == Verdict::HorizonExhausted);
  CHECK(timed.final_state.t == doctest::Approx(0.75));
}

TEST_CASE("run validates its configuration") {
  auto config = make_config(4, Direction::Bidirectional, 0.5, make_state({1, 2, 3, 4, 5}));
  CHECK_THROWS_AS(run(config), DomainError);
  config.initial = make_state({1, 2, 3, 4});
  config.sync_tolerance = 0.0;
  CHECK_THROWS_AS(run(config), DomainError);
}

TEST_CASE("trajectories form a hybrid time domain") {
  SplitMix64 rng(17);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 4 + rng.below(13);
    const Direction d = rng.below(2) ? Direction::Bidirectional : Direction::Unidirectional;
    auto config = make_config(n, d, 1.0 - rng.uniform(), random_phases(rng, n));
    config.horizon.rounds = 30;
    config.record_every = 0.25;
    const auto out = run(config);
    const auto& s = out.trajectory.samples;
    REQUIRE(s.size() >= 1);
    double last_jump_t = 0.0;
    std::size_t same_t_jumps = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      const auto& a = s[i - 1];
      const auto& b = s[i];
      REQUIRE(((b.t > a.t && b.j == a.j) || (b.t == a.t && b.j >= a.j)));
      for (double x : b.phases) REQUIRE((x >= 0.0 && x <= kTwoPi));
      if (b.j > a.j) {
        REQUIRE(b.j == a.j + 1);
        if (same_t_jumps > 0 && b.t == last_jump_t) {
          ++same_t_jumps;
        } else {
          REQUIRE(b.t - last_jump_t <= 1.0 + 1e-12);
          same_t_jumps = 1;
          last_jump_t = b.t;
        }
        REQUIRE(same_t_jumps <= n);
      }
    }
    CHECK(out.stats.max_jumps_per_instant <= n);
    CHECK(out.stats.max_interfiring_time <= 1.0 + 1e-12);
  }
}

TEST_CASE("semicircle starts synchronize") {
  SplitMix64 rng(23);
  for (int k = 0; k < 60; ++k) {
    const std::size_t n = 4 + rng.below(13);
    const double spread = kPi * rng.uniform();
    const double base = rng.uniform(0.0, kTwoPi - spread);
    std::vector<double> p(n);
    for (double& v : p) v = base + spread * rng.uniform();
    PrcSpec prc;
    if (rng.below(2)) prc = prc.with_refractory(n, rng.below(n), kPi * (1.0 - rng.uniform()));
    const Direction d = rng.below(2) ? Direction::Bidirectional : Direction::Unidirectional;
    auto config = make_config(n, d, rng.uniform(0.05, 1.0), make_state(p), prc);
    config.horizon.rounds = 100000;
    config.record = false;
    CHECK(run(config).verdict == Verdict::Synchronized);
  }
}

TEST_CASE("trajectory csv layout") {
  const auto x0 = worst_case_state(4, 1.0, WorstCase::UniU2uniform);
  auto config = make_config(4, Direction::Unidirectional, 1.0, x0, PrcSpec().with_refractory(4, 0, kPi));
  config.record_every = 0.1;
  const auto out = run(config);
  std::ostringstream os;
  write_trajectory_csv(os, out.trajectory);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,j,x_1,x_2,x_3,x_4,fired_mask");
  std::string line;
  std::size_t rows = 0;
  bool saw_fire = false;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
    saw_fire = saw_fire || line.substr(line.rfind(',') + 1) != "0";
  }
  CHECK(rows == out.trajectory.samples.size());
  CHECK(saw_fire);
  CHECK(fired_mask({0, 3}, 4) == 9);
  CHECK_THROWS_AS(fired_mask({0}, 65), DomainError);
}

TEST_CASE("outcome json echoes the run") {
  const auto x0 = worst_case_state(8, 0.8377, WorstCase::BiUbar);
  const auto out = run(make_config(8, Direction::Bidirectional, 0.8377, x0));
  const auto j = nlohmann::json::parse(outcome_json(out, {"demo", "worst-bi", "n = 8\n"}));
  CHECK(j["verdict"] == "clustered_equilibrium");
  CHECK(j["t_sync"].is_null());
  CHECK(j["config"]["n"] == 8);
  CHECK(j["config"]["direction"] == "bi");
  CHECK(j["final_phases"].size() == 8);
  CHECK(j["spec_text"] == "n = 8\n");
}

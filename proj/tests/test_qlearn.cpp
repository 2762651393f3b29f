#include <cmath>
#include <numeric>

#include "doctest.h"
#include "support/toy_games.hpp"
#include "turnq/games.hpp"
#include "turnq/qlearn.hpp"

using namespace turnq;

namespace {

const StateKey kA("a"), kB("b"), kC("c"), kZ("z");

TransitionSample sample_of(const Game& g, const StateKey& s, ActionId a) {
  const StepResult r = g.next(s, a);
  return {s, a, r.next, r.reward};
}

}  // namespace

TEST_CASE("target keeps the sign when the mover repeats") {
  toy::ChainGame g;
  QTable q;
  q.set(kB, 0, 5.0);
  q.set(kB, 1, -2.0);
  CHECK(q_target(sample_of(g, kA, 0), q, g) == 1.0 + 5.0);
}

TEST_CASE("target flips the sign when the mover changes") {
  toy::ChainGame g;
  QTable q;
  q.set(kC, 0, 3.0);
  q.set(kC, 1, 4.0);
  CHECK(q_target(sample_of(g, kB, 0), q, g) == 2.0 - 4.0);
}

TEST_CASE("terminal successors contribute nothing") {
  toy::ChainGame g;
  QTable q;
  q.set(kZ, 0, 100.0);  // never read
  CHECK(q_target(sample_of(g, kC, 0), q, g) == 3.0);
  CHECK(state_value(q, kZ, g) == 0.0);
}

TEST_CASE("alpha = 1 overwrites and counts visits") {
  toy::ChainGame g;
  QTable q;
  q.set(kC, 0, 123.0);
  const auto sched = LearningRateSchedule::constant(1.0);
  CHECK(q_update(q, sample_of(g, kC, 0), sched, g) == 3.0);
  CHECK(q.value(kC, 0) == 3.0);
  CHECK(q.visits(kC, 0) == 1);
  q_update(q, sample_of(g, kC, 0), sched, g);
  CHECK(q.visits(kC, 0) == 2);
}

TEST_CASE("fractional and visit-count rates") {
  toy::ChainGame g;
  QTable q;
  q_update(q, sample_of(g, kC, 0), LearningRateSchedule::constant(0.5), g);
  CHECK(q.value(kC, 0) == 1.5);

  const auto vc = LearningRateSchedule::visit_count(10.0);
  CHECK(vc.rate(0) == 1.0);
  CHECK(vc.rate(10) == 0.5);
  CHECK(vc.rate(30) == 0.25);
  QTable r;
  q_update(r, sample_of(g, kC, 0), vc, g);
  CHECK(r.value(kC, 0) == 3.0);
  CHECK_THROWS_AS(LearningRateSchedule::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LearningRateSchedule::constant(1.5), std::invalid_argument);
  CHECK_THROWS_AS(LearningRateSchedule::visit_count(0.0), std::invalid_argument);
}

TEST_CASE("updating a terminal state is an error") {
  toy::ChainGame g;
  QTable q;
  CHECK_THROWS_AS(q_update(q, {kZ, 0, kZ, 0.0}, LearningRateSchedule::constant(1.0), g),
                  std::invalid_argument);
}

TEST_CASE("exploitation takes the lowest-index argmax over legal actions") {
  TicTacToe g;
  const StateKey s = g.initial_state();
  QTable q;
  CHECK(exploit_action(q, s, g) == 0);
  q.set(s, 3, 1.0);
  q.set(s, 6, 1.0);
  CHECK(exploit_action(q, s, g) == 3);
  CHECK(state_value(q, s, g) == 1.0);
  // Entries for illegal actions are ignored.
  const StateKey t = g.next(s, 3).next;
  q.set(t, 3, 50.0);
  q.set(t, 5, -1.0);
  CHECK(exploit_action(q, t, g) == 0);
  CHECK(state_value(q, t, g) == 0.0);
}

TEST_CASE("boltzmann: beta = 0 is uniform") {
  TicTacToe g;
  QTable q;
  const StateKey s = g.initial_state();
  for (int a = 0; a < 9; ++a) q.set(s, a, a * 0.7 - 2.0);
  const auto p = boltzmann_probabilities(q, s, {0.0}, g);
  REQUIRE(p.size() == 9);
  for (double x : p) CHECK(std::abs(x - 1.0 / 9.0) <= 1e-12);
}

TEST_CASE("boltzmann: beta = ln 3 on two actions gives 3:1") {
  toy::ChainGame g;
  QTable q;
  q.set(kA, 0, 1.0);
  q.set(kA, 1, 0.0);
  const auto p = boltzmann_probabilities(q, kA, {std::log(3.0)}, g);
  CHECK(std::abs(p[0] - 0.75) <= 1e-12);
  CHECK(std::abs(p[1] - 0.25) <= 1e-12);
}

TEST_CASE("boltzmann: large beta concentrates on the argmax") {
  TicTacToe g;
  QTable q;
  const StateKey s = g.initial_state();
  q.set(s, 4, 1.0);
  const auto p = boltzmann_probabilities(q, s, {30.0}, g);
  CHECK(p[4] >= 1.0 - 1e-12);
}

TEST_CASE("boltzmann: invariant under a constant shift") {
  TicTacToe g;
  const StateKey s = g.initial_state();
  QTable q, shifted;
  for (int a = 0; a < 9; ++a) {
    q.set(s, a, std::sin(a));
    shifted.set(s, a, std::sin(a) + 1000.0);
  }
  for (double beta : {0.0, 0.5, 2.0, 8.0}) {
    const auto p = boltzmann_probabilities(q, s, {beta}, g);
    const auto r = boltzmann_probabilities(shifted, s, {beta}, g);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - r[i]) <= 1e-12);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12);
  }
}

TEST_CASE("boltzmann: extreme values stay finite") {
  toy::ChainGame g;
  QTable q;
  q.set(kA, 0, 1e6);
  q.set(kA, 1, -1e6);
  const auto p = boltzmann_probabilities(q, kA, {1e3}, g);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
}

TEST_CASE("sample_index follows the distribution") {
  Rng rng(11);
  const std::vector<double> p = {0.2, 0.0, 0.8};
  int counts[3] = {0, 0, 0};
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++counts[sample_index(p, rng)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[0] / double(n) - 0.2) < 0.02);
  Rng a(1), b(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_index(p, a) == sample_index(p, b));
}

TEST_CASE("policy specs resolve and label") {
  TicTacToe g;
  QTable q;
  CHECK(PolicySpec::exploit().label() == "exploit");
  CHECK(PolicySpec::boltzmann(0.5).label() == "boltzmann(0.5)");
  CHECK(PolicySpec::heuristic_named("win-block").label() == "win-block");
  CHECK(make_policy(PolicySpec::exploit(), g, &q)->is_deterministic());
  CHECK_FALSE(make_policy(PolicySpec::boltzmann(1.0), g, &q)->is_deterministic());
  CHECK(make_policy(PolicySpec::heuristic_named("center-first"), g)->name() == "center-first");
  CHECK_THROWS_AS(make_policy(PolicySpec::exploit(), g, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(make_policy(PolicySpec::heuristic_named("zzz"), g), std::invalid_argument);
  CHECK_THROWS_AS(make_policy(PolicySpec::boltzmann(-1.0), g, &q), std::invalid_argument);
}

#include <set>

#include "doctest.h"
#include "support/toy_games.hpp"
#include "turnq/games.hpp"

using namespace turnq;

TEST_CASE("sign convention") {
  CHECK(sgn(Player::kP1, Player::kP1) == 1);
  CHECK(sgn(Player::kP1, Player::kP2) == -1);
  CHECK(sgn(Player::kP2, Player::kP2) == 1);
  CHECK(opponent(Player::kP1) == Player::kP2);
  CHECK(to_string(Player::kP2) == "P2");
}

TEST_CASE("state keys compare and hash by bytes") {
  const StateKey a(std::string("\x01\x02", 2)), b(std::string("\x01\x02", 2));
  const StateKey c(std::string("\x01\x03", 2));
  CHECK(a == b);
  CHECK(a < c);
  CHECK(StateKeyHash{}(a) == StateKeyHash{}(b));
  CHECK(to_hex(c) == "0103");
}

TEST_CASE("seed mixing and uniform draws are reproducible") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(a);
    CHECK(u == uniform01(b));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng r(3);
  for (int i = 0; i < 1000; ++i) CHECK(uniform_index(r, 7) < 7);
  const StateKey k("abc");
  CHECK(stable_hash(k, 5) == stable_hash(k, 5));
  CHECK(stable_hash(k, 5) != stable_hash(k, 6));
}

TEST_CASE("rollout records samples and payoffs are zero-sum") {
  TicTacToe ttt;
  UniformRandomPolicy p1(ttt), p2(ttt);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EpisodeTrace trace = rollout(ttt, p1, p2, seed);
    CHECK(trace.length == static_cast<int>(trace.samples.size()));
    CHECK(ttt.is_terminal(trace.terminal_state));
    CHECK(trace.samples.front().state == ttt.initial_state());
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
      CHECK(trace.samples[i].state == trace.samples[i - 1].next_state);
    }
    CHECK(episode_payoff(ttt, trace, Player::kP1) ==
          -episode_payoff(ttt, trace, Player::kP2));
    CHECK(trace == rollout(ttt, p1, p2, seed));
  }
}

TEST_CASE("rollout stops at the horizon on a cyclic game") {
  toy::CycleGame g;
  const FunctionPolicy stay("stay", [](const StateKey&) { return 0; });
  const EpisodeTrace trace = rollout(g, stay, stay, 1);
  CHECK(trace.length == g.horizon_bound());
  CHECK_FALSE(g.is_terminal(trace.terminal_state));
}

TEST_CASE("episode payoff credits the mover of each sample") {
  toy::ChainGame g;
  const FunctionPolicy zero("zero", [](const StateKey&) { return 0; });
  const EpisodeTrace trace = rollout(g, zero, zero, 0);
  // a -> b (P1 +1), b -> c (P1 +2), c -> z (P2 +3).
  REQUIRE(trace.length == 3);
  CHECK(episode_payoff(g, trace, Player::kP1) == 0.0);
  CHECK(episode_payoff(g, trace, Player::kP2) == 0.0);
  const FunctionPolicy one("one", [](const StateKey&) { return 1; });
  const EpisodeTrace t2 = rollout(g, zero, one, 0);
  CHECK(episode_payoff(g, t2, Player::kP1) == 4.0);
}

TEST_CASE("illegal actions are rejected with the offending policy") {
  TicTacToe ttt;
  const FunctionPolicy bad("bad", [](const StateKey&) { return 42; });
  UniformRandomPolicy ok(ttt);
  CHECK_THROWS_AS(rollout(ttt, bad, ok, 0), IllegalActionError);
  try {
    rollout(ttt, bad, ok, 0);
  } catch (const IllegalActionError& e) {
    CHECK(e.action() == 42);
    CHECK(e.state() == ttt.initial_state());
  }
  CHECK_THROWS_AS(ttt.next(ttt.initial_state(), 9), IllegalActionError);
}

TEST_CASE("heuristic policies are validated and deterministic") {
  TicTacToe ttt;
  CHECK_THROWS_AS(HeuristicPolicy(ttt, "nope"), std::invalid_argument);
  const HeuristicPolicy h(ttt, "random-legal", 9);
  Rng r1(1), r2(2);
  CHECK(h.act(ttt.initial_state(), r1) == h.act(ttt.initial_state(), r2));
  CHECK(h.is_deterministic());
}

TEST_CASE("uniform random policy covers every legal action") {
  TicTacToe ttt;
  UniformRandomPolicy p(ttt);
  Rng rng(5);
  std::set<ActionId> seen;
  for (int i = 0; i < 500; ++i) seen.insert(p.act(ttt.initial_state(), rng));
  CHECK(seen.size() == 9);
}

#include <memory>

#include "doctest.h"
#include "support/negamax.hpp"
#include "support/toy_games.hpp"
#include "turnq/games.hpp"
#include "turnq/oracle.hpp"
#include "turnq/qlearn.hpp"

using namespace turnq;

namespace {

std::vector<PolicyPtr> heuristics_of(const Game& g) {
  std::vector<PolicyPtr> out;
  for (const auto& h : g.heuristic_names()) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      out.push_back(std::make_shared<HeuristicPolicy>(g, h, seed));
    }
  }
  out.push_back(std::make_shared<FunctionPolicy>(
      "first-legal", [&g](const StateKey& s) { return g.legal_actions(s).front(); }));
  out.push_back(std::make_shared<FunctionPolicy>(
      "last-legal", [&g](const StateKey& s) { return g.legal_actions(s).back(); }));
  return out;
}

double root_of(const Game& g) {
  const ExactSolution sol = solve_exact(g);
  return sol.v_star.at(g.initial_state());
}

}  // namespace

TEST_CASE("root values agree with plain negamax") {
  CHECK(negamax::ttt_root() == 0);
  CHECK(root_of(TicTacToe{}) == 0.0);
  const int shapes[][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}};
  for (const auto& rc : shapes) {
    negamax::Boxes nm(rc[0], rc[1]);
    CHECK(root_of(DotsAndBoxes(rc[0], rc[1])) == nm.root());
  }
  // Frozen from the negamax cross-check.
  CHECK(root_of(DotsAndBoxes(1, 1)) == -1.0);
  CHECK(root_of(DotsAndBoxes(1, 2)) == 0.0);
  CHECK(root_of(DotsAndBoxes(2, 2)) == 2.0);
}

TEST_CASE("hand-solved chain game") {
  toy::ChainGame g;
  const ExactSolution sol = solve_exact(g);
  const StateKey a("a"), b("b"), c("c");
  CHECK(sol.q_star.value(c, 0) == 3.0);
  CHECK(sol.q_star.value(c, 1) == -1.0);
  CHECK(sol.q_star.value(b, 0) == -1.0);
  CHECK(sol.q_star.value(b, 1) == 0.0);
  CHECK(sol.q_star.value(a, 0) == 1.0);
  CHECK(sol.q_star.value(a, 1) == -3.0);
  CHECK(sol.v_star.at(a) == 1.0);
  CHECK(sol.pi_star.at(a) == 0);
  CHECK(sol.pi_star.at(b) == 1);
  CHECK(sol.reachable_count == 4);
}

TEST_CASE("q_star satisfies the fixed-point equation everywhere") {
  for (const auto& game : {std::unique_ptr<Game>(new TicTacToe),
                           std::unique_ptr<Game>(new DotsAndBoxes(2, 2)),
                           std::unique_ptr<Game>(new GridSkirmish(SkirmishConfig{}))}) {
    const ExactSolution sol = solve_exact(*game);
    std::size_t pairs = 0;
    for (const auto& [s, v] : sol.v_star) {
      if (game->is_terminal(s)) {
        CHECK(v == 0.0);
        continue;
      }
      double best = -1e300;
      for (ActionId a : game->legal_actions(s)) {
        const StepResult r = game->next(s, a);
        const TransitionSample smp{s, a, r.next, r.reward};
        CHECK(sol.q_star.value(s, a) == q_target(smp, sol.q_star, *game));
        best = std::max(best, sol.q_star.value(s, a));
        ++pairs;
      }
      CHECK(v == best);
      CHECK(sol.pi_star.at(s) == exploit_action(sol.q_star, s, *game));
    }
    CHECK(pairs == sol.q_star.num_entries());
    CHECK(sol.reachable_count == sol.v_star.size());
  }
}

TEST_CASE("saddle point holds against built-in heuristics") {
  for (const auto& game : {std::unique_ptr<Game>(new TicTacToe),
                           std::unique_ptr<Game>(new DotsAndBoxes(1, 1)),
                           std::unique_ptr<Game>(new DotsAndBoxes(1, 2))}) {
    const ExactSolution sol = solve_exact(*game);
    const SaddleReport rep = verify_saddle(*game, sol, heuristics_of(*game));
    CHECK_MESSAGE(rep.ok, game->description() << ": " << rep.worst_detail);
    CHECK(rep.worst_violation == 0.0);
    CHECK(rep.checks > 0);
  }
}

TEST_CASE("a damaged solution is caught") {
  TicTacToe g;
  const ExactSolution sol = solve_exact(g);
  const StateKey s0 = g.initial_state();
  // X at 0 and 1, O at 3 and 4: X wins at 2 but the damaged policy plays 8.
  const StateKey s = g.next(g.next(g.next(g.next(s0, 0).next, 3).next, 1).next, 4).next;
  REQUIRE(sol.pi_star.at(s) == 2);
  ExactSolution bad = sol;
  bad.pi_star[s] = 8;
  const SaddleReport rep = verify_saddle(g, bad, heuristics_of(g));
  CHECK_FALSE(rep.ok);
  CHECK(rep.worst_violation > 0.0);
  CHECK_FALSE(rep.worst_detail.empty());
}

TEST_CASE("policy pair values match rollouts") {
  DotsAndBoxes g(2, 2);
  const HeuristicPolicy p1(g, "safe-edge"), p2(g, "random-legal", 4);
  const ValueMap vals = policy_pair_values(g, p1, p2);
  const EpisodeTrace trace = rollout(g, p1, p2, 0);
  const double from_rollout = episode_payoff(g, trace, Player::kP1);
  CHECK(vals.at(g.initial_state()) == from_rollout);
  CHECK(policy_pair_root_value(g, p1, p2) == from_rollout);
}

TEST_CASE("best responses bound every fixed policy") {
  TicTacToe g;
  const ExactSolution sol = solve_exact(g);
  const PolicyPtr star = solution_policy(sol);
  CHECK(best_response_root(g, *star, Player::kP1) == 0.0);
  CHECK(best_response_root(g, *star, Player::kP2) == 0.0);
  for (const PolicyPtr& p : heuristics_of(g)) {
    for (Player who : {Player::kP1, Player::kP2}) {
      const double br = best_response_root(g, *p, who);
      CHECK(br <= 0.0);
      const Policy& a = who == Player::kP1 ? *p : *star;
      const Policy& b = who == Player::kP1 ? *star : *p;
      CHECK(br <= sgn(who, Player::kP1) * policy_pair_root_value(g, a, b));
    }
  }
  // Playing the lowest free cell loses to a best response.
  const FunctionPolicy first("first-legal",
                             [&g](const StateKey& s) { return g.legal_actions(s).front(); });
  CHECK(best_response_root(g, first, Player::kP1) == -1.0);
  CHECK(best_response_root(g, first, Player::kP2) == -1.0);
}

TEST_CASE("oracle guards") {
  toy::CycleGame cyc;
  CHECK_THROWS_AS(solve_exact(cyc), CycleDetected);
  toy::CoinGame coin;
  CHECK_THROWS_AS(solve_exact(coin), std::invalid_argument);
  CHECK_THROWS_AS(solve_exact(TicTacToe{}, 100), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_reachable(TicTacToe{}, 5477), BudgetExceeded);
  CHECK(enumerate_reachable(TicTacToe{}, 5478).size() == 5478);
  TicTacToe g;
  UniformRandomPolicy u(g);
  CHECK_THROWS_AS(policy_pair_values(g, u, u), std::invalid_argument);
}

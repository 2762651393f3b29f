// Exhaustive ground truth for small deterministic games whose reachable
// state graph is acyclic. Everything here is memoized backward recursion
// from initial_state(); unreachable states are never touched.

#ifndef TURNQ_ORACLE_HPP_
#define TURNQ_ORACLE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "turnq/game.hpp"
#include "turnq/qtable.hpp"

namespace turnq {

using ValueMap = std::unordered_map<StateKey, double, StateKeyHash>;

inline constexpr std::size_t kDefaultOracleBudget = 8'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactSolution {
  QTable q_star;  // every reachable non-terminal (s, a)
  ValueMap v_star;  // every reachable state; 0 at terminals
  std::unordered_map<StateKey, ActionId, StateKeyHash> pi_star;
  std::size_t reachable_count = 0;
};

// All states reachable from initial_state() (terminal ones included), in DFS
// discovery order.
std::vector<StateKey> enumerate_reachable(
    const Game& game, std::size_t budget = kDefaultOracleBudget);

// Q*(s,a) = r + sgn1(s) sgn1(s') V*(s'), V* = max_a Q*, pi* = lowest-index
// argmax.
ExactSolution solve_exact(const Game& game,
                          std::size_t budget = kDefaultOracleBudget);

// Deterministic policy following pi_star; throws for states outside it.
PolicyPtr solution_policy(const ExactSolution& solution);

// V_{pi1,pi2}(s) for every reachable state, in the mover-relative convention
// (sgn_i(s) V(s) is player i's payoff from s on).
ValueMap policy_pair_values(const Game& game, const Policy& pi1,
                            const Policy& pi2,
                            std::size_t budget = kDefaultOracleBudget);

// V_{pi1,pi2}(initial_state()), following the single play path.
double policy_pair_root_value(const Game& game, const Policy& pi1,
                              const Policy& pi2);

// Payoff to `player` from each state when `player` follows `fixed` and the
// opponent minimizes that payoff. Covers the states reachable from the root
// under that regime.
ValueMap best_response_values(const Game& game, const Policy& fixed,
                              Player player,
                              std::size_t budget = kDefaultOracleBudget);

double best_response_root(const Game& game, const Policy& fixed, Player player,
                          std::size_t budget = kDefaultOracleBudget);

struct SaddleReport {
  bool ok = true;
  double worst_violation = 0.0;  // largest amount by which a check failed
  std::string worst_detail;
  std::size_t checks = 0;
};

// Checks, at every reachable state, that the solution's policy pair
// reproduces v_star and that no challenge policy improves on it for either
// player; then checks that best responses against pi1*/pi2* at the root
// equal the game value.
SaddleReport verify_saddle(const Game& game, const ExactSolution& solution,
                           const std::vector<PolicyPtr>& challenges,
                           std::size_t budget = kDefaultOracleBudget);

}  // namespace turnq

#endif  // TURNQ_ORACLE_HPP_

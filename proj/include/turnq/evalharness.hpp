// Evaluation of trained tables: payoff of the exploitation policy against a
// set of opponents, and its true security level via a best-response search.

#ifndef TURNQ_EVALHARNESS_HPP_
#define TURNQ_EVALHARNESS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "turnq/game.hpp"
#include "turnq/oracle.hpp"
#include "turnq/qlearn.hpp"
#include "turnq/qtable.hpp"

namespace turnq {

struct EvalRow {
  std::string opponent;
  Player perspective = Player::kP1;
  int games = 0;
  double mean = 0.0;  // signed payoff for `perspective`
  double min = 0.0;
  bool exact = false;  // computed by DP along the deterministic play path
  bool operator==(const EvalRow&) const = default;
};

struct EvalReport {
  Player perspective = Player::kP1;
  std::vector<EvalRow> rows;
  double root_q = 0.0;  // sgn_perspective(s1) * max_a Q(s1, a)
  bool converged = false;

  double min_payoff() const;  // +inf with no rows
};

// Plays exploit(q) for `perspective` against each opponent. Deterministic
// games with deterministic opponents are evaluated exactly (one game);
// otherwise `games_per_opponent` seeded rollouts are averaged.
EvalReport evaluate_against_set(const Game& game, const QTable& q,
                                Player perspective,
                                const std::vector<PolicySpec>& opponents,
                                int games_per_opponent, std::uint64_t seed,
                                bool converged = true);

struct ExploitabilityProbe {
  double root_q = 0.0;    // what the table promises `perspective`
  double security = 0.0;  // min over all opponent policies
  double gap() const { return root_q - security; }
};

// Throws BudgetExceeded when the best-response search outgrows `budget`.
ExploitabilityProbe probe_exploitability(
    const Game& game, const QTable& q, Player perspective,
    std::size_t budget = kDefaultOracleBudget);

// The signed root value max_a Q(s1, a) seen from `perspective`.
double root_q(const Game& game, const QTable& q, Player perspective);

// CSV with header opponent,perspective,games,mean,min,root_q,converged.
void write_eval_csv(const std::vector<EvalReport>& reports, std::ostream& out);

}  // namespace turnq

#endif  // TURNQ_EVALHARNESS_HPP_

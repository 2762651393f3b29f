#include "turnq/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "turnq/explore.hpp"

namespace turnq {

double EvalReport::min_payoff() const {
  double m = INFINITY;
  for (const auto& r : rows) m = std::min(m, r.min);
  return m;
}

double root_q(const Game& game, const QTable& q, Player perspective) {
  const StateKey s1 = game.initial_state();
  return sgn(perspective, game.mover(s1)) * state_value(q, s1, game);
}

EvalReport evaluate_against_set(const Game& game, const QTable& q,
                                Player perspective,
                                const std::vector<PolicySpec>& opponents,
                                int games_per_opponent, std::uint64_t seed,
                                bool converged) {
  EvalReport report;
  report.perspective = perspective;
  report.converged = converged;
  report.root_q = root_q(game, q, perspective);

  const ExploitPolicy mine(game, q);
  const int root_sign = sgn(perspective, game.mover(game.initial_state()));
  for (std::size_t i = 0; i < opponents.size(); ++i) {
    const PolicyPtr other = make_policy(opponents[i], game, &q);
    const Policy& p1 = perspective == Player::kP1 ? static_cast<const Policy&>(mine) : *other;
    const Policy& p2 = perspective == Player::kP1 ? *other : static_cast<const Policy&>(mine);
    EvalRow row;
    row.opponent = opponents[i].label();
    row.perspective = perspective;
    if (game.is_deterministic() && other->is_deterministic()) {
      row.games = 1;
      row.exact = true;
      row.mean = row.min = root_sign * policy_pair_root_value(game, p1, p2);
    } else {
      row.games = std::max(1, games_per_opponent);
      double total = 0.0, worst = INFINITY;
      for (int g = 0; g < row.games; ++g) {
        const auto trace = rollout(game, p1, p2, mix_seed(seed, i * 1000003ULL + g));
        const double payoff = episode_payoff(game, trace, perspective);
        total += payoff;
        worst = std::min(worst, payoff);
      }
      row.mean = total / row.games;
      row.min = worst;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

ExploitabilityProbe probe_exploitability(const Game& game, const QTable& q,
                                         Player perspective,
                                         std::size_t budget) {
  ExploitabilityProbe probe;
  probe.root_q = root_q(game, q, perspective);
  const ExploitPolicy mine(game, q);
  probe.security = best_response_root(game, mine, perspective, budget);
  return probe;
}

void write_eval_csv(const std::vector<EvalReport>& reports, std::ostream& out) {
  out << "opponent,perspective,games,mean,min,root_q,converged\n";
  for (const EvalReport& rep : reports) {
    for (const EvalRow& r : rep.rows) {
      out << r.opponent << ',' << to_string(r.perspective) << ',' << r.games
          << ',' << format_number(r.mean) << ',' << format_number(r.min) << ','
          << format_number(rep.root_q) << ',' << (rep.converged ? 1 : 0)
          << '\n';
    }
  }
}

}  // namespace turnq

#include "turnq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace turnq {
namespace {

void require_deterministic(const Game& game) {
  if (!game.is_deterministic()) {
    throw std::invalid_argument("oracle requires a deterministic game");
  }
}

void require_deterministic(const Policy& p) {
  if (!p.is_deterministic()) {
    throw std::invalid_argument("oracle requires deterministic policies, got " +
                                p.name());
  }
}

void check_budget(std::size_t n, std::size_t budget) {
  if (n > budget) {
    throw BudgetExceeded("reachable state budget of " + std::to_string(budget) +
                         " exceeded");
  }
}

// Memoized post-order evaluation over an acyclic state graph. `backup(s,
// recurse)` returns the value of non-terminal s, calling recurse(s') for the
// successors it needs.
class Memo {
 public:
  explicit Memo(std::size_t budget) : budget_(budget) {}

  template <typename Backup>
  double eval(const Game& game, const StateKey& s, Backup& backup) {
    if (auto it = values_.find(s); it != values_.end()) return it->second;
    if (game.is_terminal(s)) {
      store(s, 0.0);
      return 0.0;
    }
    if (!on_path_.insert(s).second) {
      throw CycleDetected("state graph has a cycle through " + to_hex(s));
    }
    auto recurse = [&](const StateKey& next) { return eval(game, next, backup); };
    const double v = backup(s, recurse);
    on_path_.erase(s);
    store(s, v);
    return v;
  }

  ValueMap take() { return std::move(values_); }

 private:
  void store(const StateKey& s, double v) {
    values_.emplace(s, v);
    check_budget(values_.size(), budget_);
  }

  std::size_t budget_;
  ValueMap values_;
  std::unordered_set<StateKey, StateKeyHash> on_path_;
};

double signed_next(const Game& game, const StateKey& s, const StateKey& next,
                   double next_value) {
  if (game.is_terminal(next)) return 0.0;
  return game.mover(s) == game.mover(next) ? next_value : -next_value;
}

}  // namespace

std::vector<StateKey> enumerate_reachable(const Game& game,
                                          std::size_t budget) {
  require_deterministic(game);
  std::unordered_set<StateKey, StateKeyHash> seen;
  std::vector<StateKey> order;
  std::vector<StateKey> stack{game.initial_state()};
  seen.insert(stack.back());
  while (!stack.empty()) {
    StateKey s = std::move(stack.back());
    stack.pop_back();
    for (ActionId a : game.legal_actions(s)) {
      StepResult r = game.next(s, a);
      if (seen.insert(r.next).second) {
        check_budget(seen.size(), budget);
        stack.push_back(std::move(r.next));
      }
    }
    order.push_back(std::move(s));
  }
  return order;
}

ExactSolution solve_exact(const Game& game, std::size_t budget) {
  require_deterministic(game);
  ExactSolution sol;
  Memo memo(budget);
  auto backup = [&](const StateKey& s, auto& recurse) {
    double best = -INFINITY;
    ActionId best_a = 0;
    for (ActionId a : game.legal_actions(s)) {
      const StepResult r = game.next(s, a);
      const double q = r.reward + signed_next(game, s, r.next, recurse(r.next));
      sol.q_star.set(s, a, q);
      if (q > best) {
        best = q;
        best_a = a;
      }
    }
    sol.pi_star.emplace(s, best_a);
    return best;
  };
  memo.eval(game, game.initial_state(), backup);
  sol.v_star = memo.take();
  sol.reachable_count = sol.v_star.size();
  return sol;
}

PolicyPtr solution_policy(const ExactSolution& solution) {
  const auto* pi = &solution.pi_star;
  return std::make_shared<FunctionPolicy>("pi-star", [pi](const StateKey& s) {
    auto it = pi->find(s);
    if (it == pi->end()) {
      throw std::out_of_range("pi-star undefined at state " + to_hex(s));
    }
    return it->second;
  });
}

ValueMap policy_pair_values(const Game& game, const Policy& pi1,
                            const Policy& pi2, std::size_t budget) {
  require_deterministic(game);
  require_deterministic(pi1);
  require_deterministic(pi2);
  Rng unused(0);
  Memo memo(budget);
  auto backup = [&](const StateKey& s, auto& recurse) {
    const Policy& actor = game.mover(s) == Player::kP1 ? pi1 : pi2;
    const ActionId a = actor.act(s, unused);
    if (!game.is_legal(s, a)) throw IllegalActionError(s, a, actor.name());
    const StepResult r = game.next(s, a);
    return r.reward + signed_next(game, s, r.next, recurse(r.next));
  };
  for (const StateKey& s : enumerate_reachable(game, budget)) {
    memo.eval(game, s, backup);
  }
  return memo.take();
}

double policy_pair_root_value(const Game& game, const Policy& pi1,
                              const Policy& pi2) {
  require_deterministic(game);
  require_deterministic(pi1);
  require_deterministic(pi2);
  // Accumulate P1's payoff along the unique path, then express it relative
  // to the root's mover.
  Rng unused(0);
  StateKey s = game.initial_state();
  const Player root_mover = game.mover(s);
  double p1_payoff = 0.0;
  for (int t = 0; t < game.horizon_bound() && !game.is_terminal(s); ++t) {
    const Policy& actor = game.mover(s) == Player::kP1 ? pi1 : pi2;
    const ActionId a = actor.act(s, unused);
    if (!game.is_legal(s, a)) throw IllegalActionError(s, a, actor.name());
    StepResult r = game.next(s, a);
    p1_payoff += r.reward * sgn(Player::kP1, game.mover(s));
    s = std::move(r.next);
  }
  return p1_payoff * sgn(Player::kP1, root_mover);
}

ValueMap best_response_values(const Game& game, const Policy& fixed,
                              Player player, std::size_t budget) {
  require_deterministic(game);
  require_deterministic(fixed);
  Rng unused(0);
  Memo memo(budget);
  // Values here are payoffs to `player`, so successors are added unsigned.
  auto backup = [&](const StateKey& s, auto& recurse) {
    if (game.mover(s) == player) {
      const ActionId a = fixed.act(s, unused);
      if (!game.is_legal(s, a)) throw IllegalActionError(s, a, fixed.name());
      const StepResult r = game.next(s, a);
      return r.reward + recurse(r.next);
    }
    double worst = INFINITY;
    for (ActionId a : game.legal_actions(s)) {
      const StepResult r = game.next(s, a);
      worst = std::min(worst, -r.reward + recurse(r.next));
    }
    return worst;
  };
  memo.eval(game, game.initial_state(), backup);
  return memo.take();
}

double best_response_root(const Game& game, const Policy& fixed, Player player,
                          std::size_t budget) {
  return best_response_values(game, fixed, player, budget)
      .at(game.initial_state());
}

SaddleReport verify_saddle(const Game& game, const ExactSolution& solution,
                           const std::vector<PolicyPtr>& challenges,
                           std::size_t budget) {
  SaddleReport report;
  const PolicyPtr star = solution_policy(solution);

  auto record = [&](double violation, const std::string& what) {
    ++report.checks;
    if (violation > 0.0) {
      report.ok = false;
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.worst_detail = what;
      }
    }
  };
  auto v_star_at = [&](const StateKey& s) {
    auto it = solution.v_star.find(s);
    return it == solution.v_star.end() ? NAN : it->second;
  };
  auto describe = [&](const std::string& label, const StateKey& s) {
    return label + " at " + game.state_to_string(s);
  };

  // Proposition-1 consistency: the pair (pi1*, pi2*) realizes v_star.
  const ValueMap on_star = policy_pair_values(game, *star, *star, budget);
  for (const auto& [s, v] : on_star) {
    const double claimed = v_star_at(s);
    const double gap = std::isnan(claimed) ? INFINITY : std::abs(v - claimed);
    record(gap, describe("V(pi*,pi*) != v_star", s));
  }

  for (const PolicyPtr& c : challenges) {
    const ValueMap dev1 = policy_pair_values(game, *c, *star, budget);
    const ValueMap dev2 = policy_pair_values(game, *star, *c, budget);
    for (const auto& [s, v] : on_star) {
      const int s1 = sgn(Player::kP1, game.mover(s));
      // P1 deviating to c must not gain; likewise for P2.
      record(s1 * (dev1.at(s) - v),
             describe("P1 gains by deviating to " + c->name(), s));
      record(-s1 * (dev2.at(s) - v),
             describe("P2 gains by deviating to " + c->name(), s));
    }
  }

  const StateKey root = game.initial_state();
  const double value_p1 = sgn(Player::kP1, game.mover(root)) * v_star_at(root);
  const double sec1 = best_response_root(game, *star, Player::kP1, budget);
  const double sec2 = best_response_root(game, *star, Player::kP2, budget);
  record(std::abs(sec1 - value_p1), "security of pi1* differs from game value");
  record(std::abs(sec2 + value_p1), "security of pi2* differs from game value");
  return report;
}

}  // namespace turnq

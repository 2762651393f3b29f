#include "turnq/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace turnq {

LearningRateSchedule LearningRateSchedule::constant(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("learning rate must lie in (0, 1]");
  }
  return {Mode::kConstant, alpha};
}

LearningRateSchedule LearningRateSchedule::visit_count(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("visit-count constant must be positive");
  }
  return {Mode::kVisitCount, c};
}

double LearningRateSchedule::rate(std::uint64_t visits) const {
  if (mode_ == Mode::kConstant) return param_;
  return param_ / (param_ + static_cast<double>(visits));
}

double state_value(const QTable& q, const StateKey& s, const Game& game) {
  const auto legal = game.legal_actions(s);
  if (legal.empty()) return 0.0;
  const QTable::Row* row = q.row(s);
  if (!row) return 0.0;
  double best = -INFINITY;
  auto it = row->begin();
  for (ActionId a : legal) {
    while (it != row->end() && it->action < a) ++it;
    const double v = (it != row->end() && it->action == a) ? it->value : 0.0;
    best = std::max(best, v);
  }
  return best;
}

ActionId exploit_action(const QTable& q, const StateKey& s, const Game& game) {
  const auto legal = game.legal_actions(s);
  if (legal.empty()) {
    throw std::invalid_argument("exploit_action at terminal state " + to_hex(s));
  }
  const QTable::Row* row = q.row(s);
  if (!row) return legal.front();
  ActionId best_a = legal.front();
  double best = -INFINITY;
  auto it = row->begin();
  for (ActionId a : legal) {
    while (it != row->end() && it->action < a) ++it;
    const double v = (it != row->end() && it->action == a) ? it->value : 0.0;
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  return best_a;
}

double q_target(const TransitionSample& sample, const QTable& q,
                const Game& game) {
  const double next = state_value(q, sample.next_state, game);
  const bool same_mover =
      game.is_terminal(sample.next_state) ||
      game.mover(sample.state) == game.mover(sample.next_state);
  return sample.reward + (same_mover ? next : -next);
}

double q_update(QTable& q, const TransitionSample& sample,
                const LearningRateSchedule& schedule, const Game& game) {
  if (game.is_terminal(sample.state)) {
    throw std::invalid_argument("q_update on terminal state " +
                                to_hex(sample.state));
  }
  const double target = q_target(sample, q, game);
  QEntry& e = q.entry(sample.state, sample.action);
  const double alpha = schedule.rate(e.visits);
  e.value = alpha == 1.0 ? target : (1.0 - alpha) * e.value + alpha * target;
  ++e.visits;
  return e.value;
}

std::vector<double> boltzmann_probabilities(const QTable& q, const StateKey& s,
                                            BoltzmannParams params,
                                            const Game& game) {
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) {
    throw std::invalid_argument("Boltzmann beta must be finite and >= 0");
  }
  const auto legal = game.legal_actions(s);
  if (legal.empty()) {
    throw std::invalid_argument("Boltzmann policy at terminal state " + to_hex(s));
  }
  std::vector<double> p(legal.size());
  double top = -INFINITY;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    p[i] = q.value(s, legal[i]);
    top = std::max(top, p[i]);
  }
  double total = 0.0;
  for (double& x : p) {
    x = params.beta == 0.0 ? 1.0 : std::exp(params.beta * (x - top));
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Rounding left u above the final partial sum.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return probs.size() - 1;
}

BoltzmannPolicy::BoltzmannPolicy(const Game& game, const QTable& q,
                                 BoltzmannParams params)
    : game_(&game), q_(&q), params_(params) {
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) {
    throw std::invalid_argument("Boltzmann beta must be finite and >= 0");
  }
}

ActionId BoltzmannPolicy::act(const StateKey& s, Rng& rng) const {
  const auto legal = game_->legal_actions(s);
  const auto probs = boltzmann_probabilities(*q_, s, params_, *game_);
  return legal[sample_index(probs, rng)];
}

std::string BoltzmannPolicy::name() const {
  return PolicySpec::boltzmann(params_.beta).label();
}

std::string PolicySpec::label() const {
  switch (kind) {
    case Kind::kExploit:
      return "exploit";
    case Kind::kBoltzmann: {
      std::ostringstream os;
      os << "boltzmann(" << beta << ")";
      return os.str();
    }
    case Kind::kHeuristic:
      return heuristic;
    case Kind::kUniformRandom:
      return "uniform-random";
  }
  return "?";
}

PolicyPtr make_policy(const PolicySpec& spec, const Game& game,
                      const QTable* q) {
  switch (spec.kind) {
    case PolicySpec::Kind::kExploit:
      if (!q) throw std::invalid_argument("exploit policy needs a Q-table");
      return std::make_shared<ExploitPolicy>(game, *q);
    case PolicySpec::Kind::kBoltzmann:
      if (!q) throw std::invalid_argument("Boltzmann policy needs a Q-table");
      return std::make_shared<BoltzmannPolicy>(game, *q,
                                               BoltzmannParams{spec.beta});
    case PolicySpec::Kind::kHeuristic:
      return std::make_shared<HeuristicPolicy>(game, spec.heuristic, spec.seed);
    case PolicySpec::Kind::kUniformRandom:
      return std::make_shared<UniformRandomPolicy>(game);
  }
  throw std::logic_error("unhandled policy kind");
}

}  // namespace turnq

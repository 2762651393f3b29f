// Turn-game Q-learning: the sign-flipping target, the update rule, and the
// policies derived from a Q-table.
//
// For a sample (s, a, s', r) the target is
//     r + sgn1(s) sgn1(s') max_{a'} Q(s', a'),
// so the next-state value is added when the mover keeps the turn and
// subtracted when the turn passes. Maxima range over legal actions only, and
// terminal states are worth 0.

#ifndef TURNQ_QLEARN_HPP_
#define TURNQ_QLEARN_HPP_

#include <string>
#include <vector>

#include "turnq/game.hpp"
#include "turnq/qtable.hpp"

namespace turnq {

class LearningRateSchedule {
 public:
  enum class Mode { kConstant, kVisitCount };

  // alpha in (0, 1].
  static LearningRateSchedule constant(double alpha);
  // alpha_k = c / (c + n(s, a)), n counted before the update; c > 0.
  static LearningRateSchedule visit_count(double c = 10.0);

  double rate(std::uint64_t visits) const;
  Mode mode() const { return mode_; }
  double parameter() const { return param_; }

 private:
  LearningRateSchedule(Mode m, double p) : mode_(m), param_(p) {}
  Mode mode_;
  double param_;
};

struct BoltzmannParams {
  double beta = 0.0;  // finite, >= 0
};

double q_target(const TransitionSample& sample, const QTable& q,
                const Game& game);

// Replaces Q(s, a) with (1 - alpha) Q(s, a) + alpha * target, bumps the visit
// count and returns the new value. Throws std::invalid_argument when s is
// terminal.
double q_update(QTable& q, const TransitionSample& sample,
                const LearningRateSchedule& schedule, const Game& game);

// max over legal actions; 0 at terminal states.
double state_value(const QTable& q, const StateKey& s, const Game& game);

// Lowest-indexed legal action attaining the max. Throws at terminal states.
ActionId exploit_action(const QTable& q, const StateKey& s, const Game& game);

// P(a | s) proportional to exp(beta Q(s, a)) over legal actions, in the
// order of legal_actions(s).
std::vector<double> boltzmann_probabilities(const QTable& q, const StateKey& s,
                                            BoltzmannParams params,
                                            const Game& game);

// Inverse-CDF draw; returns an index into `probs`.
std::size_t sample_index(const std::vector<double>& probs, Rng& rng);

class ExploitPolicy final : public Policy {
 public:
  ExploitPolicy(const Game& game, const QTable& q) : game_(&game), q_(&q) {}
  ActionId act(const StateKey& s, Rng&) const override {
    return exploit_action(*q_, s, *game_);
  }
  bool is_deterministic() const override { return true; }
  std::string name() const override { return "exploit"; }

 private:
  const Game* game_;
  const QTable* q_;
};

class BoltzmannPolicy final : public Policy {
 public:
  BoltzmannPolicy(const Game& game, const QTable& q, BoltzmannParams params);
  ActionId act(const StateKey& s, Rng& rng) const override;
  bool is_deterministic() const override { return false; }
  std::string name() const override;

 private:
  const Game* game_;
  const QTable* q_;
  BoltzmannParams params_;
};

// A named decision rule, resolved against a game (and a table for the
// Q-based kinds) by make_policy.
struct PolicySpec {
  enum class Kind { kExploit, kBoltzmann, kHeuristic, kUniformRandom };

  Kind kind = Kind::kExploit;
  std::string heuristic;
  double beta = 0.0;
  std::uint64_t seed = 0;

  static PolicySpec exploit() { return {}; }
  static PolicySpec boltzmann(double beta) {
    return {Kind::kBoltzmann, {}, beta, 0};
  }
  static PolicySpec heuristic_named(std::string name, std::uint64_t seed = 0) {
    return {Kind::kHeuristic, std::move(name), 0.0, seed};
  }
  static PolicySpec uniform_random() { return {Kind::kUniformRandom, {}, 0.0, 0}; }

  std::string label() const;
  bool operator==(const PolicySpec&) const = default;
};

// `q` is required for exploit and Boltzmann specs and must outlive the policy.
PolicyPtr make_policy(const PolicySpec& spec, const Game& game,
                      const QTable* q = nullptr);

}  // namespace turnq

#endif  // TURNQ_QLEARN_HPP_

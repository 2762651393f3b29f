// Core abstractions for two-player zero-sum turn games.
//
// A turn game is a controlled Markov chain in which exactly one player (the
// mover) selects the action at each state. Turns need not alternate: the
// mover is a pure function of the state key, so the state space splits into
// the states owned by P1 and those owned by P2.

#ifndef TURNQ_GAME_HPP_
#define TURNQ_GAME_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace turnq {

enum class Player : std::uint8_t { kP1 = 0, kP2 = 1 };

constexpr Player opponent(Player p) {
  return p == Player::kP1 ? Player::kP2 : Player::kP1;
}

// +1 if `who` is the mover, -1 otherwise.
constexpr int sgn(Player who, Player mover) { return who == mover ? 1 : -1; }

std::string_view to_string(Player p);

// Canonical byte encoding of a full game configuration, including whose turn
// it is. Two states behave identically iff their keys are byte-equal.
struct StateKey {
  std::string bytes;

  StateKey() = default;
  explicit StateKey(std::string b) : bytes(std::move(b)) {}

  std::size_t size() const { return bytes.size(); }
  auto operator<=>(const StateKey&) const = default;
  bool operator==(const StateKey&) const = default;
};

std::string to_hex(const StateKey& key);

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    return std::hash<std::string_view>{}(k.bytes);
  }
};

// Index into the game's fixed global action enumeration.
using ActionId = std::int32_t;

// All randomness flows through an explicitly seeded generator.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits; identical on every
// platform, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n); n > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

// splitmix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0);

// Stable 64-bit hash of key bytes (FNV-1a followed by a mix).
std::uint64_t stable_hash(const StateKey& key, std::uint64_t seed);

struct TransitionSample {
  StateKey state;
  ActionId action = 0;
  StateKey next_state;
  double reward = 0.0;  // collected by mover(state)

  bool operator==(const TransitionSample&) const = default;
};

struct StepResult {
  StateKey next;
  double reward = 0.0;
};

class IllegalActionError : public std::runtime_error {
 public:
  IllegalActionError(const StateKey& state, ActionId action,
                     const std::string& who);
  const StateKey& state() const { return state_; }
  ActionId action() const { return action_; }

 private:
  StateKey state_;
  ActionId action_;
};

// Abstract turn game. Implementations are immutable after construction and
// safe for concurrent read-only use; step() takes its randomness by argument.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string name() const = 0;
  // Canonical description of the configuration, e.g. "dots-and-boxes(1x2)".
  virtual std::string description() const = 0;

  virtual StateKey initial_state() const = 0;
  virtual Player mover(const StateKey& s) const = 0;
  // Ordered by ascending action id; empty exactly when s is terminal.
  virtual std::vector<ActionId> legal_actions(const StateKey& s) const = 0;
  virtual StepResult step(const StateKey& s, ActionId a, Rng& rng) const = 0;
  virtual bool is_terminal(const StateKey& s) const = 0;
  virtual int horizon_bound() const = 0;
  virtual bool is_deterministic() const = 0;
  virtual int num_actions() const = 0;

  // Whether the bytes form a structurally valid key for this configuration.
  virtual bool is_valid_key(const StateKey& s) const = 0;
  virtual std::string state_to_string(const StateKey& s) const;
  virtual std::string action_to_string(ActionId a) const;

  // Built-in heuristic policies (names are game specific).
  virtual std::vector<std::string> heuristic_names() const = 0;
  // Legal action chosen by heuristic `name`; deterministic given
  // (name, state, seed). Throws std::invalid_argument for unknown names.
  virtual ActionId heuristic_action(std::string_view name, const StateKey& s,
                                    std::uint64_t seed) const = 0;

  bool is_legal(const StateKey& s, ActionId a) const;
  // step() for deterministic games, without a caller-supplied generator.
  StepResult next(const StateKey& s, ActionId a) const;
};

// A decision rule usable by either player. Deterministic policies are
// stationary maps from states to actions and never touch the generator.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual ActionId act(const StateKey& s, Rng& rng) const = 0;
  virtual bool is_deterministic() const = 0;
  virtual std::string name() const = 0;
};

using PolicyPtr = std::shared_ptr<const Policy>;

class UniformRandomPolicy final : public Policy {
 public:
  explicit UniformRandomPolicy(const Game& game) : game_(&game) {}
  ActionId act(const StateKey& s, Rng& rng) const override;
  bool is_deterministic() const override { return false; }
  std::string name() const override { return "uniform-random"; }

 private:
  const Game* game_;
};

class HeuristicPolicy final : public Policy {
 public:
  HeuristicPolicy(const Game& game, std::string heuristic,
                  std::uint64_t seed = 0);
  ActionId act(const StateKey& s, Rng& rng) const override;
  bool is_deterministic() const override { return true; }
  std::string name() const override { return heuristic_; }

 private:
  const Game* game_;
  std::string heuristic_;
  std::uint64_t seed_;
};

// Wraps an arbitrary callable as a deterministic policy.
class FunctionPolicy final : public Policy {
 public:
  using Fn = std::function<ActionId(const StateKey&)>;
  FunctionPolicy(std::string name, Fn fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  ActionId act(const StateKey& s, Rng&) const override { return fn_(s); }
  bool is_deterministic() const override { return true; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

struct EpisodeTrace {
  std::vector<TransitionSample> samples;
  StateKey terminal_state;  // last state reached (terminal unless capped)
  int length = 0;
  bool operator==(const EpisodeTrace&) const = default;
};

// Plays one episode from initial_state(). At each state the policy owned by
// mover(state) acts; stops at a terminal state or after horizon_bound()
// steps. An illegal action raises IllegalActionError.
EpisodeTrace rollout(const Game& game, const Policy& p1, const Policy& p2,
                     std::uint64_t seed);
EpisodeTrace rollout(const Game& game, const Policy& p1, const Policy& p2,
                     Rng& rng);

// Sum of sample rewards, signed + where `perspective` was the mover.
double episode_payoff(const Game& game, const EpisodeTrace& trace,
                      Player perspective);

}  // namespace turnq

#endif  // TURNQ_GAME_HPP_

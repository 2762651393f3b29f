#include "turnq/game.hpp"

#include <algorithm>
#include <sstream>

namespace turnq {

std::string_view to_string(Player p) { return p == Player::kP1 ? "P1" : "P2"; }

std::string to_hex(const StateKey& key) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(key.bytes.size() * 2);
  for (unsigned char c : key.bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xF]);
  }
  return out;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stable_hash(const StateKey& key, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : key.bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return mix_seed(h, seed);
}

IllegalActionError::IllegalActionError(const StateKey& state, ActionId action,
                                       const std::string& who)
    : std::runtime_error("illegal action " + std::to_string(action) +
                         " by " + who + " in state " + to_hex(state)),
      state_(state),
      action_(action) {}

std::string Game::state_to_string(const StateKey& s) const {
  return to_hex(s);
}

std::string Game::action_to_string(ActionId a) const {
  return std::to_string(a);
}

bool Game::is_legal(const StateKey& s, ActionId a) const {
  const auto legal = legal_actions(s);
  return std::binary_search(legal.begin(), legal.end(), a);
}

StepResult Game::next(const StateKey& s, ActionId a) const {
  if (!is_deterministic()) {
    throw std::logic_error("Game::next requires a deterministic game");
  }
  Rng unused(0);
  return step(s, a, unused);
}

ActionId UniformRandomPolicy::act(const StateKey& s, Rng& rng) const {
  const auto legal = game_->legal_actions(s);
  return legal[uniform_index(rng, legal.size())];
}

HeuristicPolicy::HeuristicPolicy(const Game& game, std::string heuristic,
                                 std::uint64_t seed)
    : game_(&game), heuristic_(std::move(heuristic)), seed_(seed) {
  const auto names = game.heuristic_names();
  if (std::find(names.begin(), names.end(), heuristic_) == names.end()) {
    throw std::invalid_argument("heuristic '" + heuristic_ +
                                "' is not defined for " + game.name());
  }
}

ActionId HeuristicPolicy::act(const StateKey& s, Rng&) const {
  return game_->heuristic_action(heuristic_, s, seed_);
}

EpisodeTrace rollout(const Game& game, const Policy& p1, const Policy& p2,
                     std::uint64_t seed) {
  Rng rng(seed);
  return rollout(game, p1, p2, rng);
}

EpisodeTrace rollout(const Game& game, const Policy& p1, const Policy& p2,
                     Rng& rng) {
  EpisodeTrace trace;
  StateKey s = game.initial_state();
  const int horizon = game.horizon_bound();
  while (!game.is_terminal(s) && trace.length < horizon) {
    const Policy& actor = game.mover(s) == Player::kP1 ? p1 : p2;
    const ActionId a = actor.act(s, rng);
    if (!game.is_legal(s, a)) throw IllegalActionError(s, a, actor.name());
    StepResult r = game.step(s, a, rng);
    trace.samples.push_back({s, a, r.next, r.reward});
    s = std::move(r.next);
    ++trace.length;
  }
  trace.terminal_state = std::move(s);
  return trace;
}

double episode_payoff(const Game& game, const EpisodeTrace& trace,
                      Player perspective) {
  double total = 0.0;
  for (const auto& sample : trace.samples) {
    total += sample.reward * sgn(perspective, game.mover(sample.state));
  }
  return total;
}

}  // namespace turnq

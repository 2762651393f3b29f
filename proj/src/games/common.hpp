#ifndef TURNQ_SRC_GAMES_COMMON_HPP_
#define TURNQ_SRC_GAMES_COMMON_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "turnq/game.hpp"

namespace turnq::detail {

// "random-legal": a pseudo-random but stationary choice, i.e. a fixed map
// from states to actions for each seed.
inline ActionId random_legal(const std::vector<ActionId>& legal,
                             const StateKey& s, std::uint64_t seed) {
  return legal[stable_hash(s, seed) % legal.size()];
}

[[noreturn]] inline void unknown_heuristic(const Game& game,
                                           std::string_view name) {
  throw std::invalid_argument("heuristic '" + std::string(name) +
                              "' is not defined for " + game.name());
}

inline void require_nonterminal(const Game& game, const StateKey& s) {
  if (game.is_terminal(s)) {
    throw std::invalid_argument("heuristic queried at terminal state " +
                                to_hex(s));
  }
}

}  // namespace turnq::detail

#endif  // TURNQ_SRC_GAMES_COMMON_HPP_

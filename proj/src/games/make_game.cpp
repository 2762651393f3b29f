#include "turnq/games.hpp"

namespace turnq {

std::unique_ptr<Game> make_game(const GameConfig& config) {
  if (config.name == "tictactoe") return std::make_unique<TicTacToe>();
  if (config.name == "dots-and-boxes") {
    return std::make_unique<DotsAndBoxes>(config.rows, config.cols);
  }
  if (config.name == "grid-skirmish") {
    return std::make_unique<GridSkirmish>(config.skirmish);
  }
  throw std::invalid_argument("unknown game '" + config.name + "'");
}

}  // namespace turnq

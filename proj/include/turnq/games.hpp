// Built-in games: Tic-Tac-Toe (alternating turns), Dots-and-Boxes (the mover
// repeats after closing a box) and grid-skirmish (a small unit wargame where
// each unit acts once per faction turn).

#ifndef TURNQ_GAMES_HPP_
#define TURNQ_GAMES_HPP_

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "turnq/game.hpp"

namespace turnq {

// ---------------------------------------------------------------------------
// Tic-Tac-Toe. Action a marks cell a (row-major). Completing a line pays +1
// to the mover; a draw pays nothing.

class TicTacToe final : public Game {
 public:
  static constexpr int kCells = 9;

  std::string name() const override { return "tictactoe"; }
  std::string description() const override { return "tictactoe"; }
  StateKey initial_state() const override;
  Player mover(const StateKey& s) const override;
  std::vector<ActionId> legal_actions(const StateKey& s) const override;
  StepResult step(const StateKey& s, ActionId a, Rng& rng) const override;
  bool is_terminal(const StateKey& s) const override;
  int horizon_bound() const override { return kCells; }
  bool is_deterministic() const override { return true; }
  int num_actions() const override { return kCells; }
  bool is_valid_key(const StateKey& s) const override;
  std::string state_to_string(const StateKey& s) const override;
  std::vector<std::string> heuristic_names() const override;
  ActionId heuristic_action(std::string_view name, const StateKey& s,
                            std::uint64_t seed) const override;
};

// ---------------------------------------------------------------------------
// Dots-and-Boxes on a rows x cols grid of boxes. Edges are numbered with the
// (rows+1)*cols horizontal edges first (row-major), then the rows*(cols+1)
// vertical ones. Each box closed pays +1 to the mover, who then moves again.

class DotsAndBoxes final : public Game {
 public:
  static constexpr int kMaxSide = 4;

  DotsAndBoxes(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_edges() const { return num_edges_; }
  // Edge ids bounding box (r, c): top, bottom, left, right.
  std::array<int, 4> box_edges(int r, int c) const;
  // Number of boxes that drawing `edge` completes given the drawn mask.
  int boxes_closed_by(std::uint64_t mask, int edge) const;
  std::uint64_t edge_mask(const StateKey& s) const;

  std::string name() const override { return "dots-and-boxes"; }
  std::string description() const override;
  StateKey initial_state() const override;
  Player mover(const StateKey& s) const override;
  std::vector<ActionId> legal_actions(const StateKey& s) const override;
  StepResult step(const StateKey& s, ActionId a, Rng& rng) const override;
  bool is_terminal(const StateKey& s) const override;
  int horizon_bound() const override { return num_edges_; }
  bool is_deterministic() const override { return true; }
  int num_actions() const override { return num_edges_; }
  bool is_valid_key(const StateKey& s) const override;
  std::vector<std::string> heuristic_names() const override;
  ActionId heuristic_action(std::string_view name, const StateKey& s,
                            std::uint64_t seed) const override;

 private:
  StateKey encode(std::uint64_t mask, Player mover) const;

  int rows_;
  int cols_;
  int num_edges_;
  int mask_bytes_;
  // For each edge, the boxes (as indices into box_masks_) it borders.
  std::vector<std::vector<int>> edge_boxes_;
  std::vector<std::uint64_t> box_masks_;
};

// ---------------------------------------------------------------------------
// Grid-skirmish.

enum class UnitType : std::uint8_t { kInfantry = 0, kArmor = 1, kArtillery = 2 };
enum class Terrain : std::uint8_t { kClear = 0, kUrban = 1 };

std::string_view to_string(UnitType t);
std::optional<UnitType> unit_type_from_string(std::string_view s);

int max_health(UnitType t);
// Manhattan firing range.
int fire_range(UnitType t);

// Health lost by `defender` when shot by `attacker`, before clamping to the
// defender's remaining health. Shipped table (rows attacker, cols defender):
//
//              infantry  armor  artillery
//   infantry       2       1        2
//   armor          3       2        3
//   artillery      2       2        3
//
// A defender standing on urban terrain takes one point less (floor 0).
int salvo_damage(UnitType attacker, UnitType defender, Terrain terrain);

struct SkirmishConfig {
  int width = 3;
  int height = 3;
  int duration = 2;  // rounds; each round is a P1 turn followed by a P2 turn
  std::vector<UnitType> p1_units{UnitType::kInfantry};
  std::vector<UnitType> p2_units{UnitType::kInfantry};
  // Cell indices (y * width + x). Empty selects the default placement:
  // P1 along the top row from the left, P2 along the bottom row from the
  // right.
  std::vector<int> p1_start;
  std::vector<int> p2_start;
  // Urban cells; nullopt selects the single centre cell.
  std::optional<std::vector<int>> cities;
};

// Actions of the active unit: hold, four moves, or shooting enemy unit j.
namespace skirmish_action {
constexpr ActionId kHold = 0;
constexpr ActionId kNorth = 1;  // y - 1
constexpr ActionId kEast = 2;   // x + 1
constexpr ActionId kSouth = 3;  // y + 1
constexpr ActionId kWest = 4;   // x - 1
constexpr ActionId kShootBase = 5;
}  // namespace skirmish_action

class GridSkirmish final : public Game {
 public:
  static constexpr int kMaxUnitsPerSide = 8;
  static constexpr std::uint8_t kDead = 0xFF;

  struct Unit {
    std::uint8_t pos = kDead;
    std::uint8_t hp = 0;
    std::uint8_t acted = 0;
  };
  // Decoded view of a state key. Units are stored P1 roster first.
  struct State {
    int round = 0;
    Player mover = Player::kP1;
    std::vector<Unit> units;
  };

  explicit GridSkirmish(SkirmishConfig config);

  const SkirmishConfig& config() const { return config_; }
  int num_units() const { return static_cast<int>(types_.size()); }
  Player owner(int unit) const;
  UnitType type(int unit) const { return types_[unit]; }
  Terrain terrain(int cell) const { return terrain_[cell]; }
  // Roster index of enemy j relative to `p`.
  int enemy_unit(Player p, int j) const;
  int roster_size(Player p) const;
  State decode(const StateKey& s) const;
  StateKey encode(const State& st) const;
  // Lowest-indexed live unit of the mover that has not acted; -1 if none.
  int active_unit(const State& st) const;
  int distance(int cell_a, int cell_b) const;

  std::string name() const override { return "grid-skirmish"; }
  std::string description() const override;
  StateKey initial_state() const override;
  Player mover(const StateKey& s) const override;
  std::vector<ActionId> legal_actions(const StateKey& s) const override;
  StepResult step(const StateKey& s, ActionId a, Rng& rng) const override;
  bool is_terminal(const StateKey& s) const override;
  int horizon_bound() const override;
  bool is_deterministic() const override { return true; }
  int num_actions() const override;
  bool is_valid_key(const StateKey& s) const override;
  std::string state_to_string(const StateKey& s) const override;
  std::string action_to_string(ActionId a) const override;
  std::vector<std::string> heuristic_names() const override;
  ActionId heuristic_action(std::string_view name, const StateKey& s,
                            std::uint64_t seed) const override;

 private:
  bool terminal(const State& st) const;
  std::vector<ActionId> legal(const State& st) const;
  int move_target(int cell, ActionId dir) const;  // -1 if off-grid
  bool occupied(const State& st, int cell) const;
  std::vector<int> enemies_in_range(const State& st, int unit) const;
  int nearest_enemy_distance(const State& st, int cell) const;

  SkirmishConfig config_;
  std::vector<UnitType> types_;
  std::vector<Terrain> terrain_;
  std::vector<int> cities_;
};

// ---------------------------------------------------------------------------

struct GameConfig {
  std::string name;  // tictactoe | dots-and-boxes | grid-skirmish
  int rows = 1;      // dots-and-boxes
  int cols = 1;
  SkirmishConfig skirmish;
};

// Throws std::invalid_argument for unknown names or out-of-range parameters.
std::unique_ptr<Game> make_game(const GameConfig& config);

}  // namespace turnq

#endif  // TURNQ_GAMES_HPP_

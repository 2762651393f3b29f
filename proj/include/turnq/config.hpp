// JSON run configuration. See docs/config.md for the schema.

#ifndef TURNQ_CONFIG_HPP_
#define TURNQ_CONFIG_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "turnq/explore.hpp"
#include "turnq/games.hpp"
#include "turnq/oracle.hpp"

namespace turnq {

// Names the offending key as a dotted path, e.g. "exit.window".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  GameConfig game;
  std::vector<std::string> protect_p1;
  std::vector<std::string> protect_p2;
  std::uint64_t heuristic_seed = 0;  // seeds random-legal
  ExitConfig exit;
  bool epsilon_given = false;
  LearningRateSchedule schedule = LearningRateSchedule::constant(1.0);
  std::vector<double> temperatures = kDefaultTemperatures;
  bool tempered_both_sides = false;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::size_t oracle_budget = kDefaultOracleBudget;
  int eval_games = 100;
  bool residual_sweep = true;
  bool record_timing = false;

  ProtectSets protect_sets() const;
  // Resolves game-dependent defaults (epsilon 1e-3 for stochastic games).
  TrainConfig train_config(const Game& game) const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

// Parses the "game" section alone.
GameConfig parse_game_config(const nlohmann::json& section);

}  // namespace turnq

#endif  // TURNQ_CONFIG_HPP_

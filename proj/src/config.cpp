#include "turnq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace turnq {
namespace {

using nlohmann::json;

void allow_only(const json& obj, const std::string& path,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) {
      throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
    }
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::int64_t get_int(const json& obj, const std::string& path, const char* key,
                     std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) {
    throw ConfigError(join(path, key), "must lie in [" + std::to_string(lo) +
                                           ", " + std::to_string(hi) + "]");
  }
  return x;
}

double get_real(const json& obj, const std::string& path, const char* key,
                double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(key, "expected true or false");
  return obj.at(key).get<bool>();
}

std::vector<std::string> get_names(const json& obj, const std::string& path,
                                   const char* key) {
  std::vector<std::string> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(path, key), "expected a list of names");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]",
                        "expected a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<int> get_cells(const json& obj, const std::string& path,
                           const char* key, int width, int height) {
  const json& v = obj.at(key);
  const std::string where = join(path, key);
  if (!v.is_array()) throw ConfigError(where, "expected a list of [x, y] pairs");
  std::vector<int> cells;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& p = v[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
        !p[1].is_number_integer()) {
      throw ConfigError(at, "expected [x, y]");
    }
    const int x = p[0].get<int>(), y = p[1].get<int>();
    if (x < 0 || y < 0 || x >= width || y >= height) {
      throw ConfigError(at, "cell off the grid");
    }
    cells.push_back(y * width + x);
  }
  return cells;
}

std::vector<UnitType> get_units(const json& obj, const std::string& path,
                                const char* key) {
  std::vector<UnitType> out;
  const auto names = get_names(obj, path, key);
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto t = unit_type_from_string(names[i]);
    if (!t) {
      throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]",
                        "unknown unit type '" + names[i] + "'");
    }
    out.push_back(*t);
  }
  return out;
}

}  // namespace

GameConfig parse_game_config(const json& g) {
  const std::string path = "game";
  if (!g.is_object()) throw ConfigError(path, "expected an object");
  if (!g.contains("name") || !g.at("name").is_string()) {
    throw ConfigError("game.name", "required string");
  }
  GameConfig cfg;
  cfg.name = g.at("name").get<std::string>();
  if (cfg.name == "tictactoe") {
    allow_only(g, path, {"name"});
  } else if (cfg.name == "dots-and-boxes") {
    allow_only(g, path, {"name", "rows", "cols"});
    cfg.rows = static_cast<int>(get_int(g, path, "rows", 1, 1, DotsAndBoxes::kMaxSide));
    cfg.cols = static_cast<int>(get_int(g, path, "cols", 1, 1, DotsAndBoxes::kMaxSide));
  } else if (cfg.name == "grid-skirmish") {
    allow_only(g, path, {"name", "width", "height", "duration", "units_per_side",
                         "p1_units", "p2_units", "p1_start", "p2_start", "cities"});
    auto& s = cfg.skirmish;
    s.width = static_cast<int>(get_int(g, path, "width", 3, 1, 15));
    s.height = static_cast<int>(get_int(g, path, "height", 3, 1, 15));
    s.duration = static_cast<int>(get_int(g, path, "duration", 2, 1, 100));
    const int per_side = static_cast<int>(get_int(
        g, path, "units_per_side", 1, 1, GridSkirmish::kMaxUnitsPerSide));
    s.p1_units.assign(per_side, UnitType::kInfantry);
    s.p2_units.assign(per_side, UnitType::kInfantry);
    if (g.contains("p1_units")) s.p1_units = get_units(g, path, "p1_units");
    if (g.contains("p2_units")) s.p2_units = get_units(g, path, "p2_units");
    if (g.contains("p1_start")) s.p1_start = get_cells(g, path, "p1_start", s.width, s.height);
    if (g.contains("p2_start")) s.p2_start = get_cells(g, path, "p2_start", s.width, s.height);
    if (g.contains("cities")) s.cities = get_cells(g, path, "cities", s.width, s.height);
  } else {
    throw ConfigError("game.name", "unknown game '" + cfg.name + "'");
  }
  return cfg;
}

ProtectSets RunConfig::protect_sets() const {
  ProtectSets p;
  for (const auto& n : protect_p1) p.p1.push_back(PolicySpec::heuristic_named(n, heuristic_seed));
  for (const auto& n : protect_p2) p.p2.push_back(PolicySpec::heuristic_named(n, heuristic_seed));
  return p;
}

TrainConfig RunConfig::train_config(const Game& game) const {
  TrainConfig t;
  t.protect = protect_sets();
  t.exit = exit;
  if (!epsilon_given) t.exit.q_tolerance = game.is_deterministic() ? 0.0 : 1e-3;
  t.schedule = schedule;
  t.temperatures = temperatures;
  t.tempered_both_sides = tempered_both_sides;
  t.seed = seed;
  t.residual_sweep = residual_sweep;
  t.record_timing = record_timing;
  return t;
}

RunConfig parse_run_config(const json& doc) {
  allow_only(doc, "", {"game", "protect", "exit", "schedule", "temperatures",
                       "tempered_both_sides", "seed", "output_dir", "oracle_budget", "eval_games",
                       "residual_sweep", "record_timing"});
  RunConfig rc;
  if (!doc.contains("game")) throw ConfigError("game", "required section");
  rc.game = parse_game_config(doc.at("game"));

  std::unique_ptr<Game> game;
  try {
    game = make_game(rc.game);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("game", e.what());
  }

  if (doc.contains("protect")) {
    const json& p = doc.at("protect");
    allow_only(p, "protect", {"p1", "p2", "seed"});
    rc.protect_p1 = get_names(p, "protect", "p1");
    rc.protect_p2 = get_names(p, "protect", "p2");
    rc.heuristic_seed = static_cast<std::uint64_t>(
        get_int(p, "protect", "seed", 0, 0, INT64_MAX));
    const auto known = game->heuristic_names();
    for (const auto* side : {&rc.protect_p1, &rc.protect_p2}) {
      for (std::size_t i = 0; i < side->size(); ++i) {
        if (std::find(known.begin(), known.end(), (*side)[i]) == known.end()) {
          throw ConfigError(std::string(side == &rc.protect_p1 ? "protect.p1" : "protect.p2") +
                                "[" + std::to_string(i) + "]",
                            "unknown heuristic '" + (*side)[i] + "' for " + game->name());
        }
      }
    }
  }

  if (doc.contains("exit")) {
    const json& e = doc.at("exit");
    allow_only(e, "exit", {"window", "epsilon", "temper_off_episode", "max_episodes"});
    rc.exit.window = static_cast<int>(get_int(e, "exit", "window", 0, 0, INT32_MAX));
    rc.epsilon_given = e.contains("epsilon");
    rc.exit.q_tolerance = get_real(e, "exit", "epsilon", 0.0);
    if (rc.exit.q_tolerance < 0) throw ConfigError("exit.epsilon", "must be >= 0");
    rc.exit.temper_off_episode = get_int(e, "exit", "temper_off_episode", 0, 0, INT64_MAX);
    rc.exit.max_episodes = get_int(e, "exit", "max_episodes", 100000, 1, INT64_MAX);
    const std::size_t slots = 1 + rc.protect_p1.size() + rc.protect_p2.size();
    if (rc.exit.window != 0 && static_cast<std::size_t>(rc.exit.window) < slots) {
      throw ConfigError("exit.window", "must be at least the number of schedule slots (" +
                                           std::to_string(slots) + ")");
    }
  }

  if (doc.contains("schedule")) {
    const json& s = doc.at("schedule");
    allow_only(s, "schedule", {"alpha", "visit_count_c"});
    if (s.contains("alpha") && s.contains("visit_count_c")) {
      throw ConfigError("schedule", "give either alpha or visit_count_c, not both");
    }
    if (s.contains("visit_count_c")) {
      const double c = get_real(s, "schedule", "visit_count_c", 10.0);
      if (!(c > 0)) throw ConfigError("schedule.visit_count_c", "must be > 0");
      rc.schedule = LearningRateSchedule::visit_count(c);
    } else {
      const double a = get_real(s, "schedule", "alpha", 1.0);
      if (!(a > 0 && a <= 1)) throw ConfigError("schedule.alpha", "must lie in (0, 1]");
      rc.schedule = LearningRateSchedule::constant(a);
    }
  }

  if (doc.contains("temperatures")) {
    const json& t = doc.at("temperatures");
    if (!t.is_array()) throw ConfigError("temperatures", "expected a list of numbers");
    rc.temperatures.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string at = "temperatures[" + std::to_string(i) + "]";
      if (!t[i].is_number()) throw ConfigError(at, "expected a number");
      const double b = t[i].get<double>();
      if (!(b >= 0) || !std::isfinite(b)) throw ConfigError(at, "must be finite and >= 0");
      rc.temperatures.push_back(b);
    }
  }

  rc.seed = static_cast<std::uint64_t>(get_int(doc, "", "seed", 0, 0, INT64_MAX));
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a path");
    rc.output_dir = doc.at("output_dir").get<std::string>();
  }
  rc.oracle_budget = static_cast<std::size_t>(
      get_int(doc, "", "oracle_budget", kDefaultOracleBudget, 1, INT64_MAX));
  rc.eval_games = static_cast<int>(get_int(doc, "", "eval_games", 100, 1, 1000000));
  rc.tempered_both_sides = get_bool(doc, "tempered_both_sides", false);
  rc.residual_sweep = get_bool(doc, "residual_sweep", true);
  rc.record_timing = get_bool(doc, "record_timing", false);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

}  // namespace turnq

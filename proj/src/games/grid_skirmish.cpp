#include <algorithm>
#include <climits>
#include <sstream>

#include "common.hpp"
#include "turnq/games.hpp"

namespace turnq {
namespace {

constexpr int kHeaderBytes = 2;  // round, mover
constexpr int kUnitBytes = 3;    // pos, hp, acted

constexpr int kSalvo[3][3] = {
    {2, 1, 2},  // infantry
    {3, 2, 3},  // armor
    {2, 2, 3},  // artillery
};

}  // namespace

std::string_view to_string(UnitType t) {
  switch (t) {
    case UnitType::kInfantry:
      return "infantry";
    case UnitType::kArmor:
      return "armor";
    case UnitType::kArtillery:
      return "artillery";
  }
  return "?";
}

std::optional<UnitType> unit_type_from_string(std::string_view s) {
  if (s == "infantry") return UnitType::kInfantry;
  if (s == "armor") return UnitType::kArmor;
  if (s == "artillery") return UnitType::kArtillery;
  return std::nullopt;
}

int max_health(UnitType t) {
  switch (t) {
    case UnitType::kInfantry:
      return 3;
    case UnitType::kArmor:
      return 4;
    case UnitType::kArtillery:
      return 2;
  }
  return 0;
}

int fire_range(UnitType t) { return t == UnitType::kArtillery ? 2 : 1; }

int salvo_damage(UnitType attacker, UnitType defender, Terrain terrain) {
  const int base =
      kSalvo[static_cast<int>(attacker)][static_cast<int>(defender)];
  return terrain == Terrain::kUrban ? std::max(0, base - 1) : base;
}

GridSkirmish::GridSkirmish(SkirmishConfig config) : config_(std::move(config)) {
  auto& c = config_;
  if (c.width < 1 || c.height < 1) {
    throw std::invalid_argument("grid-skirmish: grid size must be >= 1");
  }
  if (c.width * c.height >= kDead) {
    throw std::invalid_argument("grid-skirmish: grid has too many cells");
  }
  if (c.duration < 1) {
    throw std::invalid_argument("grid-skirmish: duration must be >= 1");
  }
  for (const auto* roster : {&c.p1_units, &c.p2_units}) {
    if (roster->empty() ||
        static_cast<int>(roster->size()) > kMaxUnitsPerSide) {
      throw std::invalid_argument("grid-skirmish: units per side must be in [1, " +
                                  std::to_string(kMaxUnitsPerSide) + "]");
    }
  }
  const int cells = c.width * c.height;
  if (c.p1_start.empty()) {
    for (int i = 0; i < static_cast<int>(c.p1_units.size()); ++i) {
      c.p1_start.push_back(i);
    }
  }
  if (c.p2_start.empty()) {
    for (int i = 0; i < static_cast<int>(c.p2_units.size()); ++i) {
      c.p2_start.push_back(cells - 1 - i);
    }
  }
  if (c.p1_start.size() != c.p1_units.size() ||
      c.p2_start.size() != c.p2_units.size()) {
    throw std::invalid_argument(
        "grid-skirmish: start positions must match the unit rosters");
  }
  std::vector<bool> taken(cells, false);
  for (const auto* starts : {&c.p1_start, &c.p2_start}) {
    for (int p : *starts) {
      if (p < 0 || p >= cells) {
        throw std::invalid_argument("grid-skirmish: start cell off the grid");
      }
      if (taken[p]) {
        throw std::invalid_argument("grid-skirmish: start cells must be distinct");
      }
      taken[p] = true;
    }
  }
  if (!c.cities) c.cities = std::vector<int>{(c.height / 2) * c.width + c.width / 2};
  terrain_.assign(cells, Terrain::kClear);
  for (int city : *c.cities) {
    if (city < 0 || city >= cells) {
      throw std::invalid_argument("grid-skirmish: city cell off the grid");
    }
    terrain_[city] = Terrain::kUrban;
  }
  for (int i = 0; i < cells; ++i) {
    if (terrain_[i] == Terrain::kUrban) cities_.push_back(i);
  }
  types_ = c.p1_units;
  types_.insert(types_.end(), c.p2_units.begin(), c.p2_units.end());
}

Player GridSkirmish::owner(int unit) const {
  return unit < static_cast<int>(config_.p1_units.size()) ? Player::kP1
                                                          : Player::kP2;
}

int GridSkirmish::roster_size(Player p) const {
  return static_cast<int>(p == Player::kP1 ? config_.p1_units.size()
                                           : config_.p2_units.size());
}

int GridSkirmish::enemy_unit(Player p, int j) const {
  return p == Player::kP1 ? roster_size(Player::kP1) + j : j;
}

std::string GridSkirmish::description() const {
  std::ostringstream os;
  os << "grid-skirmish(" << config_.width << "x" << config_.height
     << ",duration=" << config_.duration << ",p1=";
  for (int u = 0; u < num_units(); ++u) {
    if (u == roster_size(Player::kP1)) os << ",p2=";
    const auto& starts = owner(u) == Player::kP1 ? config_.p1_start : config_.p2_start;
    const int idx = owner(u) == Player::kP1 ? u : u - roster_size(Player::kP1);
    os << to_string(types_[u]) << "@" << starts[idx] << ";";
  }
  os << ",cities=";
  for (int c : cities_) os << c << ";";
  os << ")";
  return os.str();
}

GridSkirmish::State GridSkirmish::decode(const StateKey& s) const {
  State st;
  st.round = static_cast<unsigned char>(s.bytes[0]);
  st.mover = static_cast<Player>(s.bytes[1]);
  st.units.resize(num_units());
  for (int u = 0; u < num_units(); ++u) {
    const char* p = s.bytes.data() + kHeaderBytes + kUnitBytes * u;
    st.units[u] = {static_cast<std::uint8_t>(p[0]),
                   static_cast<std::uint8_t>(p[1]),
                   static_cast<std::uint8_t>(p[2])};
  }
  return st;
}

StateKey GridSkirmish::encode(const State& st) const {
  std::string b(kHeaderBytes + kUnitBytes * num_units(), '\0');
  b[0] = static_cast<char>(st.round);
  b[1] = static_cast<char>(st.mover);
  for (int u = 0; u < num_units(); ++u) {
    char* p = b.data() + kHeaderBytes + kUnitBytes * u;
    p[0] = static_cast<char>(st.units[u].pos);
    p[1] = static_cast<char>(st.units[u].hp);
    p[2] = static_cast<char>(st.units[u].acted);
  }
  return StateKey(std::move(b));
}

StateKey GridSkirmish::initial_state() const {
  State st;
  st.units.resize(num_units());
  for (int u = 0; u < num_units(); ++u) {
    const int n1 = roster_size(Player::kP1);
    st.units[u].pos = static_cast<std::uint8_t>(
        u < n1 ? config_.p1_start[u] : config_.p2_start[u - n1]);
    st.units[u].hp = static_cast<std::uint8_t>(max_health(types_[u]));
  }
  return encode(st);
}

Player GridSkirmish::mover(const StateKey& s) const {
  return static_cast<Player>(s.bytes[1]);
}

int GridSkirmish::distance(int a, int b) const {
  const int w = config_.width;
  return std::abs(a % w - b % w) + std::abs(a / w - b / w);
}

int GridSkirmish::move_target(int cell, ActionId dir) const {
  const int w = config_.width, h = config_.height;
  const int x = cell % w, y = cell / w;
  switch (dir) {
    case skirmish_action::kNorth:
      return y > 0 ? cell - w : -1;
    case skirmish_action::kEast:
      return x + 1 < w ? cell + 1 : -1;
    case skirmish_action::kSouth:
      return y + 1 < h ? cell + w : -1;
    case skirmish_action::kWest:
      return x > 0 ? cell - 1 : -1;
    default:
      return -1;
  }
}

bool GridSkirmish::occupied(const State& st, int cell) const {
  return std::any_of(st.units.begin(), st.units.end(),
                     [cell](const Unit& u) { return u.pos == cell; });
}

bool GridSkirmish::terminal(const State& st) const {
  if (st.round >= config_.duration) return true;
  bool alive[2] = {false, false};
  for (int u = 0; u < num_units(); ++u) {
    if (st.units[u].pos != kDead) alive[static_cast<int>(owner(u))] = true;
  }
  return !alive[0] || !alive[1];
}

bool GridSkirmish::is_terminal(const StateKey& s) const {
  return terminal(decode(s));
}

int GridSkirmish::active_unit(const State& st) const {
  for (int u = 0; u < num_units(); ++u) {
    if (owner(u) == st.mover && st.units[u].pos != kDead &&
        !st.units[u].acted) {
      return u;
    }
  }
  return -1;
}

std::vector<int> GridSkirmish::enemies_in_range(const State& st,
                                                int unit) const {
  std::vector<int> out;  // enemy roster offsets j
  const Player me = owner(unit);
  for (int j = 0; j < roster_size(opponent(me)); ++j) {
    const Unit& e = st.units[enemy_unit(me, j)];
    if (e.pos != kDead &&
        distance(st.units[unit].pos, e.pos) <= fire_range(types_[unit])) {
      out.push_back(j);
    }
  }
  return out;
}

std::vector<ActionId> GridSkirmish::legal(const State& st) const {
  std::vector<ActionId> out;
  if (terminal(st)) return out;
  const int u = active_unit(st);
  out.push_back(skirmish_action::kHold);
  for (ActionId d = skirmish_action::kNorth; d <= skirmish_action::kWest; ++d) {
    const int t = move_target(st.units[u].pos, d);
    if (t >= 0 && !occupied(st, t)) out.push_back(d);
  }
  for (int j : enemies_in_range(st, u)) {
    out.push_back(skirmish_action::kShootBase + j);
  }
  return out;
}

std::vector<ActionId> GridSkirmish::legal_actions(const StateKey& s) const {
  return legal(decode(s));
}

StepResult GridSkirmish::step(const StateKey& s, ActionId a, Rng&) const {
  State st = decode(s);
  const auto legal_now = legal(st);
  if (!std::binary_search(legal_now.begin(), legal_now.end(), a)) {
    throw IllegalActionError(s, a, "grid-skirmish");
  }
  const int u = active_unit(st);
  const Player me = st.mover;
  double reward = 0.0;
  if (a >= skirmish_action::kShootBase) {
    Unit& target = st.units[enemy_unit(me, a - skirmish_action::kShootBase)];
    const int dmg = salvo_damage(
        types_[u], types_[enemy_unit(me, a - skirmish_action::kShootBase)],
        terrain_[target.pos]);
    const int loss = std::min<int>(dmg, target.hp);
    target.hp = static_cast<std::uint8_t>(target.hp - loss);
    if (target.hp == 0) target = Unit{};
    reward += loss;
  } else if (a != skirmish_action::kHold) {
    st.units[u].pos = static_cast<std::uint8_t>(move_target(st.units[u].pos, a));
  }
  st.units[u].acted = 1;

  if (!terminal(st) && active_unit(st) < 0) {
    // Faction turn ends: city bonus, then control passes.
    for (int v = 0; v < num_units(); ++v) {
      if (owner(v) != me) continue;
      if (st.units[v].pos != kDead && terrain_[st.units[v].pos] == Terrain::kUrban) {
        reward += 1.0;
      }
      st.units[v].acted = 0;
    }
    st.mover = opponent(me);
    if (st.mover == Player::kP1) ++st.round;
  }
  return {encode(st), reward};
}

int GridSkirmish::horizon_bound() const {
  return config_.duration * num_units();
}

int GridSkirmish::num_actions() const {
  return skirmish_action::kShootBase +
         std::max(roster_size(Player::kP1), roster_size(Player::kP2));
}

bool GridSkirmish::is_valid_key(const StateKey& s) const {
  if (static_cast<int>(s.size()) != kHeaderBytes + kUnitBytes * num_units()) {
    return false;
  }
  const State st = decode(s);
  if (st.round > config_.duration) return false;
  if (s.bytes[1] != 0 && s.bytes[1] != 1) return false;
  const int cells = config_.width * config_.height;
  std::vector<bool> seen(cells, false);
  for (int u = 0; u < num_units(); ++u) {
    const Unit& x = st.units[u];
    if (x.pos == kDead) {
      if (x.hp != 0 || x.acted != 0) return false;
      continue;
    }
    if (x.pos >= cells || seen[x.pos]) return false;
    seen[x.pos] = true;
    if (x.hp == 0 || x.hp > max_health(types_[u]) || x.acted > 1) return false;
    if (x.acted && owner(u) != st.mover) return false;
  }
  return true;
}

std::string GridSkirmish::state_to_string(const StateKey& s) const {
  const State st = decode(s);
  std::ostringstream os;
  os << "round " << st.round << " mover " << to_string(st.mover) << ":";
  for (int u = 0; u < num_units(); ++u) {
    os << " " << to_string(owner(u)) << to_string(types_[u]);
    if (st.units[u].pos == kDead) {
      os << "(dead)";
    } else {
      os << "(" << st.units[u].pos % config_.width << ","
         << st.units[u].pos / config_.width << " hp" << int{st.units[u].hp}
         << (st.units[u].acted ? " acted" : "") << ")";
    }
  }
  return os.str();
}

std::string GridSkirmish::action_to_string(ActionId a) const {
  switch (a) {
    case skirmish_action::kHold:
      return "hold";
    case skirmish_action::kNorth:
      return "north";
    case skirmish_action::kEast:
      return "east";
    case skirmish_action::kSouth:
      return "south";
    case skirmish_action::kWest:
      return "west";
    default:
      return "shoot" + std::to_string(a - skirmish_action::kShootBase);
  }
}

int GridSkirmish::nearest_enemy_distance(const State& st, int cell) const {
  const Player me = st.mover;
  int best = INT_MAX;
  for (int j = 0; j < roster_size(opponent(me)); ++j) {
    const Unit& e = st.units[enemy_unit(me, j)];
    if (e.pos != kDead) best = std::min(best, distance(cell, e.pos));
  }
  return best;
}

std::vector<std::string> GridSkirmish::heuristic_names() const {
  return {"random-legal", "greedy-shoot", "city-holder", "coward", "rusher"};
}

ActionId GridSkirmish::heuristic_action(std::string_view name,
                                        const StateKey& s,
                                        std::uint64_t seed) const {
  detail::require_nonterminal(*this, s);
  const State st = decode(s);
  const auto legal_now = legal(st);
  const int u = active_unit(st);
  const int here = st.units[u].pos;
  const auto in_range = enemies_in_range(st, u);
  const auto shoot = [](int j) { return skirmish_action::kShootBase + j; };

  // Lowest-id move that strictly improves `score` (higher is better).
  const auto best_move = [&](auto score) -> ActionId {
    ActionId best = skirmish_action::kHold;
    int best_score = score(here);
    for (ActionId a : legal_now) {
      if (a < skirmish_action::kNorth || a > skirmish_action::kWest) continue;
      const int sc = score(move_target(here, a));
      if (sc > best_score) {
        best = a;
        best_score = sc;
      }
    }
    return best;
  };

  if (name == "random-legal") return detail::random_legal(legal_now, s, seed);

  if (name == "greedy-shoot") {
    return in_range.empty() ? skirmish_action::kHold : shoot(in_range.front());
  }

  if (name == "city-holder") {
    if (terrain_[here] != Terrain::kUrban) {
      int target = -1;
      for (int c : cities_) {
        bool friendly = false;
        for (int v = 0; v < num_units(); ++v) {
          friendly |= owner(v) == st.mover && st.units[v].pos == c;
        }
        if (friendly) continue;
        if (target < 0 || distance(here, c) < distance(here, target)) target = c;
      }
      if (target >= 0) {
        const ActionId a =
            best_move([&](int cell) { return -distance(cell, target); });
        if (a != skirmish_action::kHold) return a;
      }
    }
    return in_range.empty() ? skirmish_action::kHold : shoot(in_range.front());
  }

  if (name == "coward") {
    return best_move([&](int cell) { return nearest_enemy_distance(st, cell); });
  }

  if (name == "rusher") {
    if (!in_range.empty()) {
      int pick = in_range.front();
      for (int j : in_range) {
        if (st.units[enemy_unit(st.mover, j)].hp <
            st.units[enemy_unit(st.mover, pick)].hp) {
          pick = j;
        }
      }
      return shoot(pick);
    }
    return best_move(
        [&](int cell) { return -nearest_enemy_distance(st, cell); });
  }

  detail::unknown_heuristic(*this, name);
}

}  // namespace turnq

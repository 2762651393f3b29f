// Opponent-informed Q-learning.
//
// Episodes cycle round-robin through the policy pairs
//   (protect1[i], exploit) ... (exploit, protect2[j]) ... (exploit, exploit)
// optionally followed by tempered Boltzmann slots. The table is frozen while
// an episode is simulated and updated from its trace afterwards. Training
// stops once a full window of episodes neither discovered a new state nor
// moved any Q value by more than the tolerance.

#ifndef TURNQ_EXPLORE_HPP_
#define TURNQ_EXPLORE_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "turnq/game.hpp"
#include "turnq/qlearn.hpp"
#include "turnq/qtable.hpp"

namespace turnq {

struct ProtectSets {
  std::vector<PolicySpec> p1;
  std::vector<PolicySpec> p2;
};

struct ScheduleSlot {
  enum class Family {
    kProtect1, kProtect2, kExploit, kTemperedP1, kTemperedP2, kTemperedBoth
  };

  Family family = Family::kExploit;
  PolicySpec p1;
  PolicySpec p2;

  std::string label() const;
  bool operator==(const ScheduleSlot&) const = default;
};

// The ordered round-robin list; tempered slots (two per temperature, the
// Boltzmann player first P1 then P2) are appended when `tempering` is set.
// `both_sides` adds a third slot per temperature with both players Boltzmann.
std::vector<ScheduleSlot> schedule_slots(const ProtectSets& protect,
                                         const std::vector<double>& temperatures,
                                         bool tempering, bool both_sides = false);

// slot list[episode mod size]; tempered slots are dropped from the list once
// episode >= temper_off_episode.
ScheduleSlot schedule_next(std::int64_t episode, const ProtectSets& protect,
                           const std::vector<double>& temperatures,
                           std::int64_t temper_off_episode,
                           bool both_sides = false);

struct StateAction {
  StateKey state;
  ActionId action = 0;
  bool operator==(const StateAction&) const = default;
};

struct StateActionHash {
  std::size_t operator()(const StateAction& p) const noexcept {
    return StateKeyHash{}(p.state) * 31 + static_cast<std::size_t>(p.action);
  }
};

struct VisitedSet {
  std::unordered_set<StateKey, StateKeyHash> states;
  std::unordered_set<StateAction, StateActionHash> pairs;
};

struct ExitConfig {
  int window = 0;  // 0 selects 4 x (number of schedule slots)
  double q_tolerance = 0.0;
  std::int64_t temper_off_episode = 0;
  std::int64_t max_episodes = 100000;
};

inline const std::vector<double> kDefaultTemperatures = {0.0, 0.5, 2.0, 8.0};

struct TrainConfig {
  ProtectSets protect;
  ExitConfig exit;
  LearningRateSchedule schedule = LearningRateSchedule::constant(1.0);
  std::vector<double> temperatures;  // empty: no tempering
  bool tempered_both_sides = false;
  std::uint64_t seed = 0;
  // Before accepting an exit, replay the stored sample of every visited pair
  // until the fixed-point equation holds on all of them (deterministic games
  // with alpha = 1 only). Any change reopens the window.
  bool residual_sweep = true;
  bool record_timing = false;  // otherwise the ms column is 0
};

struct TrainRecord {
  std::int64_t episode = 0;
  std::string slot;
  int samples = 0;
  std::size_t visited_states = 0;
  double max_dq = 0.0;
  double root_value = 0.0;
  std::int64_t ms = 0;
};

struct TrainReport {
  std::vector<TrainRecord> records;
  bool converged = false;
  std::uint64_t total_updates = 0;  // K
  std::uint64_t sweep_updates = 0;  // part of K applied by residual sweeps
  int window = 0;
};

struct TrainResult {
  QTable q;
  VisitedSet visited;
  TrainReport report;
};

// Validates the configuration (std::invalid_argument) and runs to exit.
TrainResult train(const Game& game, const TrainConfig& config,
                  const std::function<void(const TrainRecord&)>& on_record = {});

// Effective exit window for a configuration.
int effective_window(const TrainConfig& config);

struct InvarianceViolation {
  StateKey state;
  std::string policy;
  ActionId action = 0;
  StateKey successor;
  std::string reason;
};

struct InvarianceResult {
  bool ok = true;
  std::optional<InvarianceViolation> counterexample;
};

// Plays every policy pair of the round-robin's non-tempered families from the
// initial state with the exploitation policies of `q`, and checks that each
// visited state, each (state, action) taken and each successor lies in
// `visited`. Returns the first violation. Deterministic games only.
InvarianceResult visited_invariance_check(const QTable& q,
                                          const VisitedSet& visited,
                                          const ProtectSets& protect,
                                          const Game& game);

struct Residual {
  double max_abs = 0.0;
  std::optional<StateAction> worst;
};

// max |Q(s,a) - target(s,a)| over the given pairs (deterministic games).
Residual fixed_point_residual(const QTable& q, const VisitedSet& visited,
                              const Game& game);

// Rebuilds a visited set from a table: its pairs, their states and successors,
// and the initial state.
VisitedSet visited_from_table(const QTable& q, const Game& game);

// CSV with header episode,slot,samples,visited_states,max_dq,root_value,ms.
void write_train_csv(const TrainReport& report, std::ostream& out);

// Shortest round-trip decimal text for a double.
std::string format_number(double v);

}  // namespace turnq

#endif  // TURNQ_EXPLORE_HPP_

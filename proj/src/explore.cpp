#include "turnq/explore.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>

namespace turnq {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string ScheduleSlot::label() const {
  std::string a = p1.label(), b = p2.label();
  switch (family) {
    case Family::kProtect1:
      a = "protect1:" + a;
      break;
    case Family::kProtect2:
      b = "protect2:" + b;
      break;
    default:
      break;
  }
  return a + "/" + b;
}

std::vector<ScheduleSlot> schedule_slots(const ProtectSets& protect,
                                         const std::vector<double>& temperatures,
                                         bool tempering, bool both_sides) {
  using F = ScheduleSlot::Family;
  std::vector<ScheduleSlot> slots;
  for (const auto& p : protect.p1) {
    slots.push_back({F::kProtect1, p, PolicySpec::exploit()});
  }
  for (const auto& p : protect.p2) {
    slots.push_back({F::kProtect2, PolicySpec::exploit(), p});
  }
  slots.push_back({F::kExploit, PolicySpec::exploit(), PolicySpec::exploit()});
  if (tempering) {
    for (double beta : temperatures) {
      slots.push_back({F::kTemperedP1, PolicySpec::boltzmann(beta),
                       PolicySpec::exploit()});
      slots.push_back({F::kTemperedP2, PolicySpec::exploit(),
                       PolicySpec::boltzmann(beta)});
      if (both_sides) {
        slots.push_back({F::kTemperedBoth, PolicySpec::boltzmann(beta),
                         PolicySpec::boltzmann(beta)});
      }
    }
  }
  return slots;
}

ScheduleSlot schedule_next(std::int64_t episode, const ProtectSets& protect,
                           const std::vector<double>& temperatures,
                           std::int64_t temper_off_episode,
                           bool both_sides) {
  const auto slots = schedule_slots(protect, temperatures,
                                    episode < temper_off_episode, both_sides);
  return slots[static_cast<std::size_t>(episode) % slots.size()];
}

int effective_window(const TrainConfig& config) {
  if (config.exit.window > 0) return config.exit.window;
  const bool tempering =
      !config.temperatures.empty() && config.exit.temper_off_episode > 0;
  return 4 * static_cast<int>(
                 schedule_slots(config.protect, config.temperatures, tempering,
                                config.tempered_both_sides)
                     .size());
}

namespace {

void validate(const Game& game, const TrainConfig& config) {
  const auto& ex = config.exit;
  if (ex.max_episodes < 1) {
    throw std::invalid_argument("exit.max_episodes must be >= 1");
  }
  if (!(ex.q_tolerance >= 0.0)) {
    throw std::invalid_argument("exit.epsilon must be >= 0");
  }
  if (ex.temper_off_episode < 0) {
    throw std::invalid_argument("exit.temper_off_episode must be >= 0");
  }
  const auto base = schedule_slots(config.protect, {}, false).size();
  if (ex.window < 0 ||
      (ex.window > 0 && static_cast<std::size_t>(ex.window) < base)) {
    throw std::invalid_argument(
        "exit.window must cover every schedule slot (>= " +
        std::to_string(base) + ")");
  }
  for (double beta : config.temperatures) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw std::invalid_argument("temperatures must be finite and >= 0");
    }
  }
  const auto names = game.heuristic_names();
  for (const auto* side : {&config.protect.p1, &config.protect.p2}) {
    for (const auto& spec : *side) {
      if (spec.kind == PolicySpec::Kind::kHeuristic &&
          std::find(names.begin(), names.end(), spec.heuristic) == names.end()) {
        throw std::invalid_argument("heuristic '" + spec.heuristic +
                                    "' is not defined for " + game.name());
      }
    }
  }
}

// One stored sample per visited pair, in first-visit order.
struct SampleStore {
  std::vector<TransitionSample> samples;
};

bool sweep_enabled(const Game& game, const TrainConfig& config) {
  return config.residual_sweep && game.is_deterministic() &&
         config.schedule.mode() == LearningRateSchedule::Mode::kConstant &&
         config.schedule.parameter() == 1.0;
}

// Replays stored samples, latest-discovered first, until every target
// matches. Returns the largest change applied.
double residual_sweep(QTable& q, const SampleStore& store, const Game& game,
                      const LearningRateSchedule& schedule,
                      std::uint64_t& updates) {
  double max_dq = 0.0;
  for (;;) {
    bool changed = false;
    for (auto it = store.samples.rbegin(); it != store.samples.rend(); ++it) {
      const double old = q.value(it->state, it->action);
      if (q_target(*it, q, game) == old) continue;
      const double now = q_update(q, *it, schedule, game);
      ++updates;
      max_dq = std::max(max_dq, std::abs(now - old));
      changed = true;
    }
    if (!changed) return max_dq;
  }
}

}  // namespace

TrainResult train(const Game& game, const TrainConfig& config,
                  const std::function<void(const TrainRecord&)>& on_record) {
  validate(game, config);
  using Clock = std::chrono::steady_clock;

  TrainResult result;
  QTable& q = result.q;
  VisitedSet& visited = result.visited;
  TrainReport& report = result.report;
  report.window = effective_window(config);

  const StateKey root = game.initial_state();
  visited.states.insert(root);
  const bool sweeps = sweep_enabled(game, config);
  SampleStore store;
  int quiet = 0;

  for (std::int64_t ep = 0; ep < config.exit.max_episodes; ++ep) {
    const auto start = Clock::now();
    const ScheduleSlot slot = schedule_next(ep, config.protect, config.temperatures,
                                            config.exit.temper_off_episode,
                                            config.tempered_both_sides);
    const PolicyPtr p1 = make_policy(slot.p1, game, &q);
    const PolicyPtr p2 = make_policy(slot.p2, game, &q);
    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(ep)));
    const EpisodeTrace trace = rollout(game, *p1, *p2, rng);

    std::size_t new_states = 0;
    double max_dq = 0.0;
    for (const TransitionSample& sample : trace.samples) {
      const double old = q.value(sample.state, sample.action);
      const double now = q_update(q, sample, config.schedule, game);
      ++report.total_updates;
      max_dq = std::max(max_dq, std::abs(now - old));
      new_states += visited.states.insert(sample.next_state).second;
      if (visited.pairs.insert({sample.state, sample.action}).second && sweeps) {
        store.samples.push_back(sample);
      }
    }

    const bool quiet_now = new_states == 0 && max_dq <= config.exit.q_tolerance;
    quiet = quiet_now ? quiet + 1 : 0;
    if (quiet >= report.window) {
      double swept = 0.0;
      if (sweeps) {
        const auto before = report.total_updates;
        swept = residual_sweep(q, store, game, config.schedule,
                               report.total_updates);
        report.sweep_updates += report.total_updates - before;
      }
      if (swept > config.exit.q_tolerance) {
        max_dq = std::max(max_dq, swept);
        quiet = 0;
      } else {
        report.converged = true;
      }
    }

    TrainRecord rec;
    rec.episode = ep;
    rec.slot = slot.label();
    rec.samples = trace.length;
    rec.visited_states = visited.states.size();
    rec.max_dq = max_dq;
    rec.root_value = state_value(q, root, game);
    if (config.record_timing) {
      rec.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                   Clock::now() - start)
                   .count();
    }
    if (on_record) on_record(rec);
    report.records.push_back(std::move(rec));
    if (report.converged) break;
  }
  return result;
}

InvarianceResult visited_invariance_check(const QTable& q,
                                          const VisitedSet& visited,
                                          const ProtectSets& protect,
                                          const Game& game) {
  if (!game.is_deterministic()) {
    throw std::invalid_argument(
        "visited_invariance_check is unsupported for stochastic games");
  }
  InvarianceResult result;
  Rng unused(0);
  for (const ScheduleSlot& slot : schedule_slots(protect, {}, false)) {
    const PolicyPtr p1 = make_policy(slot.p1, game, &q);
    const PolicyPtr p2 = make_policy(slot.p2, game, &q);
    StateKey s = game.initial_state();
    while (!game.is_terminal(s)) {
      const Policy& actor = game.mover(s) == Player::kP1 ? *p1 : *p2;
      const ActionId a = actor.act(s, unused);
      StepResult r = game.next(s, a);
      std::string reason;
      if (!visited.states.count(s)) {
        reason = "state not visited";
      } else if (!visited.pairs.count(StateAction{s, a})) {
        reason = "action never sampled";
      } else if (!visited.states.count(r.next)) {
        reason = "successor not visited";
      }
      if (!reason.empty()) {
        result.ok = false;
        result.counterexample =
            InvarianceViolation{s, slot.label(), a, r.next, reason};
        return result;
      }
      s = std::move(r.next);
    }
  }
  return result;
}

Residual fixed_point_residual(const QTable& q, const VisitedSet& visited,
                              const Game& game) {
  Residual res;
  for (const StateAction& p : visited.pairs) {
    const StepResult r = game.next(p.state, p.action);
    const TransitionSample sample{p.state, p.action, r.next, r.reward};
    const double d = std::abs(q.value(p.state, p.action) - q_target(sample, q, game));
    if (!res.worst || d > res.max_abs) {
      res.max_abs = d;
      res.worst = p;
    }
  }
  return res;
}

VisitedSet visited_from_table(const QTable& q, const Game& game) {
  VisitedSet v;
  v.states.insert(game.initial_state());
  q.for_each([&](const StateKey& s, const QEntry& e) {
    v.pairs.insert({s, e.action});
    v.states.insert(s);
    if (game.is_deterministic() && game.is_legal(s, e.action)) {
      v.states.insert(game.next(s, e.action).next);
    }
  });
  return v;
}

void write_train_csv(const TrainReport& report, std::ostream& out) {
  out << "episode,slot,samples,visited_states,max_dq,root_value,ms\n";
  for (const TrainRecord& r : report.records) {
    out << r.episode << ',' << r.slot << ',' << r.samples << ','
        << r.visited_states << ',' << format_number(r.max_dq) << ','
        << format_number(r.root_value) << ',' << r.ms << '\n';
  }
}

}  // namespace turnq

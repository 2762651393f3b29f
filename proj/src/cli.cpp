#include "turnq/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "turnq/config.hpp"
#include "turnq/evalharness.hpp"
#include "turnq/explore.hpp"
#include "turnq/games.hpp"
#include "turnq/oracle.hpp"
#include "turnq/qtable.hpp"

namespace turnq {
namespace {

namespace fs = std::filesystem;

struct Loaded {
  RunConfig config;
  std::unique_ptr<Game> game;
};

// Returns nullopt after printing the diagnostic.
std::optional<Loaded> load(const std::string& path, std::ostream& err) {
  try {
    Loaded l;
    l.config = load_run_config(path);
    l.game = make_game(l.config.game);
    return l;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "config error: game: " << e.what() << '\n';
  }
  return std::nullopt;
}

std::vector<PolicySpec> with_exploit(std::vector<PolicySpec> specs) {
  specs.push_back(PolicySpec::exploit());
  return specs;
}

// P1 faces the P2 protect set and vice versa; both also face exploit(q).
std::vector<EvalReport> evaluate_both(const Game& game, const QTable& q,
                                      const RunConfig& rc, bool converged) {
  const ProtectSets ps = rc.protect_sets();
  return {
      evaluate_against_set(game, q, Player::kP1, with_exploit(ps.p2),
                           rc.eval_games, mix_seed(rc.seed, 1), converged),
      evaluate_against_set(game, q, Player::kP2, with_exploit(ps.p1),
                           rc.eval_games, mix_seed(rc.seed, 2), converged),
  };
}

void check_line(std::ostream& out, const char* verdict, const std::string& name,
                const std::string& detail) {
  out << verdict << ' ' << name;
  if (!detail.empty()) out << "  " << detail;
  out << '\n';
}

}  // namespace

int cmd_train(const std::string& config_path, std::ostream& out,
              std::ostream& err) {
  auto loaded = load(config_path, err);
  if (!loaded) return kExitConfigError;
  const RunConfig& rc = loaded->config;
  const Game& game = *loaded->game;
  const TrainConfig tc = rc.train_config(game);

  try {
    const fs::path dir(rc.output_dir);
    const TrainResult result = train(game, tc);
    fs::create_directories(dir);
    const bool converged = result.report.converged;

    std::ofstream train_csv(dir / "train.csv", std::ios::binary);
    write_train_csv(result.report, train_csv);
    std::ofstream eval_csv(dir / "eval.csv", std::ios::binary);
    write_eval_csv(evaluate_both(game, result.q, rc, converged), eval_csv);
    result.q.save((dir / "qtable.bin").string());
    if (!train_csv || !eval_csv) throw std::runtime_error("write failed in " + dir.string());

    out << "episodes " << result.report.records.size() << '\n'
        << "visited_states " << result.visited.states.size() << '\n'
        << "root_value " << format_number(state_value(result.q, game.initial_state(), game))
        << '\n'
        << "converged " << (converged ? "yes" : "no") << '\n';
    return converged ? kExitOk : kExitNotConverged;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_solve(const std::string& config_path, const std::string& qstar_path,
              std::ostream& out, std::ostream& err) {
  auto loaded = load(config_path, err);
  if (!loaded) return kExitConfigError;
  const Game& game = *loaded->game;
  try {
    const ExactSolution sol = solve_exact(game, loaded->config.oracle_budget);
    out << "root_value " << format_number(sol.v_star.at(game.initial_state())) << '\n'
        << "reachable_count " << sol.reachable_count << '\n';
    if (!qstar_path.empty()) sol.q_star.save(qstar_path);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudgetExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_verify(const std::string& config_path, const std::string& qtable_path,
               std::ostream& out, std::ostream& err) {
  auto loaded = load(config_path, err);
  if (!loaded) return kExitConfigError;
  const RunConfig& rc = loaded->config;
  const Game& game = *loaded->game;

  QTable q;
  try {
    q = QTable::load(qtable_path);
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormatError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  bool all_ok = true;
  auto record = [&](bool ok, const std::string& name, const std::string& detail) {
    all_ok = all_ok && ok;
    check_line(out, ok ? "PASS" : "FAIL", name, detail);
  };

  // A table from another configuration holds keys this game cannot parse.
  std::string bad_key;
  q.for_each([&](const StateKey& s, const QEntry& e) {
    if (bad_key.empty() && (!game.is_valid_key(s) || !game.is_legal(s, e.action))) {
      bad_key = to_hex(s);
    }
  });
  const bool has_root = q.contains_state(game.initial_state());
  if (!bad_key.empty() || !has_root) {
    record(false, "keys", bad_key.empty() ? "initial state missing from table"
                                          : "foreign state " + bad_key);
    return kExitVerifyFailed;
  }
  record(true, "keys", std::to_string(q.num_states()) + " states");

  try {
    const VisitedSet visited = visited_from_table(q, game);
    const ProtectSets ps = rc.protect_sets();
    if (game.is_deterministic()) {
      const InvarianceResult inv = visited_invariance_check(q, visited, ps, game);
      record(inv.ok, "invariance",
             inv.ok ? "" : inv.counterexample->policy + " at " +
                               game.state_to_string(inv.counterexample->state) +
                               ": " + inv.counterexample->reason);
      const Residual res = fixed_point_residual(q, visited, game);
      record(res.max_abs == 0.0, "residual", "max " + format_number(res.max_abs));
    } else {
      check_line(out, "SKIP", "invariance", "stochastic game");
      check_line(out, "SKIP", "residual", "stochastic game");
    }

    const auto reports = evaluate_both(game, q, rc, true);
    for (const EvalReport& rep : reports) {
      const std::string name = "security:" + std::string(to_string(rep.perspective));
      if (!game.is_deterministic()) {
        check_line(out, "SKIP", name, "stochastic game");
        continue;
      }
      const double worst = rep.min_payoff();
      record(worst >= rep.root_q, name,
             "min " + format_number(worst) + " root_q " + format_number(rep.root_q));
    }
    const double sum = reports[0].root_q + reports[1].root_q;
    record(sum == 0.0, "antisymmetry", "sum " + format_number(sum));

    for (Player p : {Player::kP1, Player::kP2}) {
      const std::string name = "probe:" + std::string(to_string(p));
      if (!game.is_deterministic()) {
        check_line(out, "SKIP", name, "stochastic game");
        continue;
      }
      try {
        const ExploitabilityProbe probe = probe_exploitability(game, q, p, rc.oracle_budget);
        record(probe.gap() >= 0.0, name,
               "gap " + format_number(probe.gap()) + " security " +
                   format_number(probe.security));
      } catch (const BudgetExceeded&) {
        check_line(out, "SKIP", name, "over oracle budget");
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return all_ok ? kExitOk : kExitVerifyFailed;
}

int cmd_export_csv(const std::string& config_path,
                   const std::string& qtable_path, const std::string& csv_path,
                   std::ostream& out, std::ostream& err) {
  auto loaded = load(config_path, err);
  if (!loaded) return kExitConfigError;
  const Game& game = *loaded->game;
  QTable q;
  try {
    q = QTable::load(qtable_path);
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitFormatError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) {
    err << "error: cannot write " << csv_path << '\n';
    return kExitError;
  }
  csv << "state,mover,action,value,visits\n";
  for (const StateKey& s : q.sorted_states()) {
    const std::string mover =
        game.is_valid_key(s) ? std::string(to_string(game.mover(s))) : std::string("?");
    for (const QEntry& e : *q.row(s)) {
      csv << to_hex(s) << ',' << mover << ',' << e.action << ','
          << format_number(e.value) << ',' << e.visits << '\n';
    }
  }
  out << "rows " << q.num_entries() << '\n';
  return csv ? kExitOk : kExitError;
}

}  // namespace turnq

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "turnq/cli.hpp"
#include "turnq/qtable.hpp"

using namespace turnq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("turnq_cli_" + std::to_string(std::rand()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string ttt_config(const fs::path& out) {
  return R"({"game": {"name": "tictactoe"},
             "protect": {"p1": ["center-first", "win-block"], "p2": ["win-block"]},
             "exit": {"temper_off_episode": 300}, "seed": 2,
             "output_dir": ")" + out.string() + R"("})";
}

}  // namespace

TEST_CASE("train writes three files and converges") {
  TempDir t;
  const std::string cfg = t.file("c.json", ttt_config(t.path / "out"));
  std::ostringstream out, err;
  CHECK(cmd_train(cfg, out, err) == kExitOk);
  CHECK(fs::exists(t.path / "out" / "train.csv"));
  CHECK(fs::exists(t.path / "out" / "eval.csv"));
  CHECK(fs::exists(t.path / "out" / "qtable.bin"));
  CHECK(out.str().find("converged yes") != std::string::npos);
  const std::string eval = slurp(t.path / "out" / "eval.csv");
  CHECK(eval.rfind("opponent,perspective,games,mean,min,root_q,converged\n", 0) == 0);
  // P1 faces win-block and exploit; P2 faces two heuristics and exploit.
  CHECK(std::count(eval.begin(), eval.end(), '\n') == 1 + 2 + 3);

  std::ostringstream vout, verr;
  CHECK(cmd_verify(cfg, (t.path / "out" / "qtable.bin").string(), vout, verr) == kExitOk);
  CHECK(vout.str().find("FAIL") == std::string::npos);
  CHECK(vout.str().find("PASS invariance") != std::string::npos);
}

TEST_CASE("identical runs give identical bytes") {
  TempDir t;
  const std::string a = t.file("a.json", ttt_config(t.path / "a"));
  const std::string b = t.file("b.json", ttt_config(t.path / "b"));
  std::ostringstream out, err;
  REQUIRE(cmd_train(a, out, err) == kExitOk);
  REQUIRE(cmd_train(b, out, err) == kExitOk);
  for (const char* f : {"train.csv", "eval.csv", "qtable.bin"}) {
    CHECK(slurp(t.path / "a" / f) == slurp(t.path / "b" / f));
  }
}

TEST_CASE("max_episodes = 1 reports non-convergence but still writes files") {
  TempDir t;
  const std::string cfg = t.file("c.json", R"({"game": {"name": "grid-skirmish"},
      "exit": {"max_episodes": 1}, "output_dir": ")" + (t.path / "o").string() + R"("})");
  std::ostringstream out, err;
  CHECK(cmd_train(cfg, out, err) == kExitNotConverged);
  CHECK(fs::exists(t.path / "o" / "qtable.bin"));
  const std::string eval = slurp(t.path / "o" / "eval.csv");
  CHECK(eval.find(",0\n") != std::string::npos);
}

TEST_CASE("config errors produce no outputs") {
  TempDir t;
  const std::string cfg = t.file("c.json", R"({"game": {"name": "chess"},
      "output_dir": ")" + (t.path / "o").string() + R"("})");
  std::ostringstream out, err;
  CHECK(cmd_train(cfg, out, err) == kExitConfigError);
  CHECK(err.str().find("game.name") != std::string::npos);
  CHECK_FALSE(fs::exists(t.path / "o"));
  CHECK(cmd_train((t.path / "missing.json").string(), out, err) == kExitConfigError);
  const std::string broken = t.file("b.json", "{ not json");
  CHECK(cmd_solve(broken, "", out, err) == kExitConfigError);
}

TEST_CASE("solve prints the game value") {
  TempDir t;
  std::ostringstream out, err;
  CHECK(cmd_solve(t.file("t.json", R"({"game": {"name": "tictactoe"}})"), "", out, err) ==
        kExitOk);
  CHECK(out.str() == "root_value 0\nreachable_count 5478\n");
  std::ostringstream out2;
  const std::string qstar = (t.path / "qstar.bin").string();
  CHECK(cmd_solve(t.file("d.json", R"({"game": {"name": "dots-and-boxes", "rows": 1, "cols": 1}})"),
                  qstar, out2, err) == kExitOk);
  CHECK(out2.str().rfind("root_value -1\n", 0) == 0);
  CHECK(QTable::load(qstar).num_entries() > 0);
}

TEST_CASE("solve refuses games over the budget") {
  TempDir t;
  std::ostringstream out, err;
  const std::string cfg = t.file("g.json", R"({"game": {"name": "grid-skirmish",
      "width": 5, "height": 5, "duration": 4, "units_per_side": 2}, "oracle_budget": 1000})");
  CHECK(cmd_solve(cfg, "", out, err) == kExitBudgetExceeded);
}

TEST_CASE("verify detects foreign and corrupt tables") {
  TempDir t;
  const std::string cfg = t.file("c.json", ttt_config(t.path / "out"));
  std::ostringstream out, err;
  REQUIRE(cmd_train(cfg, out, err) == kExitOk);
  const std::string table = (t.path / "out" / "qtable.bin").string();

  const std::string db = t.file("d.json", R"({"game": {"name": "dots-and-boxes", "rows": 1, "cols": 2}})");
  std::ostringstream vout;
  CHECK(cmd_verify(db, table, vout, err) == kExitVerifyFailed);
  CHECK(vout.str().find("FAIL keys") != std::string::npos);

  const std::string bytes = slurp(table);
  const std::string cut = (t.path / "cut.bin").string();
  std::ofstream(cut, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK(cmd_verify(cfg, cut, vout, err) == kExitFormatError);

  // A table that is not a fixed point fails the residual check.
  QTable q = QTable::load(table);
  const StateKey root(std::string(10, '\0'));
  q.set(root, 4, q.value(root, 4) + 0.5);
  const std::string skewed = (t.path / "skewed.bin").string();
  q.save(skewed);
  std::ostringstream sout;
  CHECK(cmd_verify(cfg, skewed, sout, err) == kExitVerifyFailed);
  CHECK(sout.str().find("FAIL residual") != std::string::npos);
}

TEST_CASE("export-csv dumps every entry") {
  TempDir t;
  std::ostringstream out, err;
  const std::string cfg = t.file("d.json", R"({"game": {"name": "dots-and-boxes", "rows": 1, "cols": 1}})");
  const std::string qstar = (t.path / "q.bin").string();
  REQUIRE(cmd_solve(cfg, qstar, out, err) == kExitOk);
  const std::string csv = (t.path / "q.csv").string();
  CHECK(cmd_export_csv(cfg, qstar, csv, out, err) == kExitOk);
  const std::string text = slurp(csv);
  CHECK(text.rfind("state,mover,action,value,visits\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) ==
        1 + QTable::load(qstar).num_entries());
}

TEST_CASE("the binary maps statuses to exit codes") {
  TempDir t;
  const std::string bin = TURNQ_BIN;
  const std::string good = t.file("t.json", R"({"game": {"name": "tictactoe"}})");
  const std::string bad = t.file("b.json", R"({"game": {"name": "tictactoe"}, "oops": 1})");
  auto run = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(run("solve " + good) == kExitOk);
  CHECK(run("solve " + bad) == kExitConfigError);
  CHECK(run("no-such-command") == kExitConfigError);
}

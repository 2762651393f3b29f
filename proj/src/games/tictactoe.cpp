#include <algorithm>

#include "common.hpp"
#include "turnq/games.hpp"

namespace turnq {
namespace {

// Key layout: 9 cell bytes (0 empty, 1 X, 2 O) followed by the mover byte.
constexpr int kMoverByte = TicTacToe::kCells;
constexpr char kEmpty = 0;
constexpr std::array<std::array<int, 3>, 8> kLines = {{{0, 1, 2},
                                                       {3, 4, 5},
                                                       {6, 7, 8},
                                                       {0, 3, 6},
                                                       {1, 4, 7},
                                                       {2, 5, 8},
                                                       {0, 4, 8},
                                                       {2, 4, 6}}};

bool has_line(const std::string& b) {
  for (const auto& l : kLines) {
    if (b[l[0]] != kEmpty && b[l[0]] == b[l[1]] && b[l[1]] == b[l[2]]) {
      return true;
    }
  }
  return false;
}

// Lowest cell that would complete a line for `mark`, or -1.
int winning_cell(const std::string& b, char mark) {
  for (int c = 0; c < TicTacToe::kCells; ++c) {
    if (b[c] != kEmpty) continue;
    for (const auto& l : kLines) {
      if (std::find(l.begin(), l.end(), c) == l.end()) continue;
      int own = 0;
      for (int x : l) own += (b[x] == mark);
      if (own == 2) return c;
    }
  }
  return -1;
}

int center_first(const std::string& b) {
  for (int c : {4, 0, 2, 6, 8, 1, 3, 5, 7}) {
    if (b[c] == kEmpty) return c;
  }
  return -1;
}

}  // namespace

StateKey TicTacToe::initial_state() const {
  return StateKey(std::string(kCells + 1, kEmpty));
}

Player TicTacToe::mover(const StateKey& s) const {
  return s.bytes[kMoverByte] == 0 ? Player::kP1 : Player::kP2;
}

bool TicTacToe::is_terminal(const StateKey& s) const {
  if (has_line(s.bytes)) return true;
  for (int c = 0; c < kCells; ++c) {
    if (s.bytes[c] == kEmpty) return false;
  }
  return true;
}

std::vector<ActionId> TicTacToe::legal_actions(const StateKey& s) const {
  std::vector<ActionId> out;
  if (is_terminal(s)) return out;
  for (int c = 0; c < kCells; ++c) {
    if (s.bytes[c] == kEmpty) out.push_back(c);
  }
  return out;
}

StepResult TicTacToe::step(const StateKey& s, ActionId a, Rng&) const {
  if (a < 0 || a >= kCells || s.bytes[a] != kEmpty || is_terminal(s)) {
    throw IllegalActionError(s, a, "tictactoe");
  }
  const bool x_to_move = s.bytes[kMoverByte] == 0;
  StepResult r{s, 0.0};
  r.next.bytes[a] = x_to_move ? 1 : 2;
  r.next.bytes[kMoverByte] = x_to_move ? 1 : 0;
  if (has_line(r.next.bytes)) r.reward = 1.0;
  return r;
}

bool TicTacToe::is_valid_key(const StateKey& s) const {
  if (s.size() != kCells + 1) return false;
  int x = 0, o = 0;
  for (int c = 0; c < kCells; ++c) {
    const char v = s.bytes[c];
    if (v < 0 || v > 2) return false;
    x += (v == 1);
    o += (v == 2);
  }
  const char m = s.bytes[kMoverByte];
  if (m != 0 && m != 1) return false;
  return (x - o == 0 && m == 0) || (x - o == 1 && m == 1);
}

std::string TicTacToe::state_to_string(const StateKey& s) const {
  std::string out;
  for (int c = 0; c < kCells; ++c) {
    out.push_back(".XO"[static_cast<int>(s.bytes[c])]);
    if (c % 3 == 2 && c != kCells - 1) out.push_back('/');
  }
  return out;
}

std::vector<std::string> TicTacToe::heuristic_names() const {
  return {"random-legal", "center-first", "win-block"};
}

ActionId TicTacToe::heuristic_action(std::string_view name, const StateKey& s,
                                     std::uint64_t seed) const {
  detail::require_nonterminal(*this, s);
  const std::string& b = s.bytes;
  if (name == "random-legal") {
    return detail::random_legal(legal_actions(s), s, seed);
  }
  if (name == "center-first") return center_first(b);
  if (name == "win-block") {
    const char own = b[kMoverByte] == 0 ? 1 : 2;
    const char other = own == 1 ? 2 : 1;
    if (int c = winning_cell(b, own); c >= 0) return c;
    if (int c = winning_cell(b, other); c >= 0) return c;
    return center_first(b);
  }
  detail::unknown_heuristic(*this, name);
}

}  // namespace turnq

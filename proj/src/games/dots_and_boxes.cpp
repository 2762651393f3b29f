#include <bit>

#include "common.hpp"
#include "turnq/games.hpp"

namespace turnq {

DotsAndBoxes::DotsAndBoxes(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1 || rows > kMaxSide || cols > kMaxSide) {
    throw std::invalid_argument("dots-and-boxes: rows and cols must be in [1, " +
                                std::to_string(kMaxSide) + "]");
  }
  num_edges_ = (rows + 1) * cols + rows * (cols + 1);
  mask_bytes_ = (num_edges_ + 7) / 8;
  edge_boxes_.resize(num_edges_);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::uint64_t m = 0;
      for (int e : box_edges(r, c)) {
        m |= std::uint64_t{1} << e;
        edge_boxes_[e].push_back(static_cast<int>(box_masks_.size()));
      }
      box_masks_.push_back(m);
    }
  }
}

std::array<int, 4> DotsAndBoxes::box_edges(int r, int c) const {
  const int horizontal = (rows_ + 1) * cols_;
  return {r * cols_ + c, (r + 1) * cols_ + c, horizontal + r * (cols_ + 1) + c,
          horizontal + r * (cols_ + 1) + c + 1};
}

int DotsAndBoxes::boxes_closed_by(std::uint64_t mask, int edge) const {
  const std::uint64_t after = mask | (std::uint64_t{1} << edge);
  int closed = 0;
  for (int b : edge_boxes_[edge]) {
    closed += (after & box_masks_[b]) == box_masks_[b];
  }
  return closed;
}

std::string DotsAndBoxes::description() const {
  return "dots-and-boxes(" + std::to_string(rows_) + "x" +
         std::to_string(cols_) + ")";
}

std::uint64_t DotsAndBoxes::edge_mask(const StateKey& s) const {
  std::uint64_t m = 0;
  for (int i = 0; i < mask_bytes_; ++i) {
    m |= std::uint64_t{static_cast<unsigned char>(s.bytes[i])} << (8 * i);
  }
  return m;
}

StateKey DotsAndBoxes::encode(std::uint64_t mask, Player mover) const {
  std::string b(mask_bytes_ + 1, '\0');
  for (int i = 0; i < mask_bytes_; ++i) {
    b[i] = static_cast<char>((mask >> (8 * i)) & 0xFF);
  }
  b[mask_bytes_] = static_cast<char>(mover);
  return StateKey(std::move(b));
}

StateKey DotsAndBoxes::initial_state() const { return encode(0, Player::kP1); }

Player DotsAndBoxes::mover(const StateKey& s) const {
  return static_cast<Player>(s.bytes[mask_bytes_]);
}

bool DotsAndBoxes::is_terminal(const StateKey& s) const {
  return std::popcount(edge_mask(s)) == num_edges_;
}

std::vector<ActionId> DotsAndBoxes::legal_actions(const StateKey& s) const {
  const std::uint64_t m = edge_mask(s);
  std::vector<ActionId> out;
  for (int e = 0; e < num_edges_; ++e) {
    if (!((m >> e) & 1)) out.push_back(e);
  }
  return out;
}

StepResult DotsAndBoxes::step(const StateKey& s, ActionId a, Rng&) const {
  const std::uint64_t m = edge_mask(s);
  if (a < 0 || a >= num_edges_ || ((m >> a) & 1)) {
    throw IllegalActionError(s, a, "dots-and-boxes");
  }
  const int closed = boxes_closed_by(m, a);
  const Player who = mover(s);
  return {encode(m | (std::uint64_t{1} << a), closed > 0 ? who : opponent(who)),
          static_cast<double>(closed)};
}

bool DotsAndBoxes::is_valid_key(const StateKey& s) const {
  if (static_cast<int>(s.size()) != mask_bytes_ + 1) return false;
  if (num_edges_ < 64 && (edge_mask(s) >> num_edges_) != 0) return false;
  const char m = s.bytes[mask_bytes_];
  return m == 0 || m == 1;
}

std::vector<std::string> DotsAndBoxes::heuristic_names() const {
  return {"random-legal", "safe-edge"};
}

ActionId DotsAndBoxes::heuristic_action(std::string_view name,
                                        const StateKey& s,
                                        std::uint64_t seed) const {
  detail::require_nonterminal(*this, s);
  const auto legal = legal_actions(s);
  if (name == "random-legal") return detail::random_legal(legal, s, seed);
  if (name != "safe-edge") detail::unknown_heuristic(*this, name);

  const std::uint64_t m = edge_mask(s);
  for (ActionId e : legal) {
    if (boxes_closed_by(m, e) > 0) return e;
  }
  // Otherwise avoid giving any box its third side.
  for (ActionId e : legal) {
    const std::uint64_t after = m | (std::uint64_t{1} << e);
    bool safe = true;
    for (int b : edge_boxes_[e]) {
      if (std::popcount(after & box_masks_[b]) == 3) safe = false;
    }
    if (safe) return e;
  }
  return legal.front();
}

}  // namespace turnq

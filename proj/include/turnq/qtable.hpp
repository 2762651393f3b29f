// Tabular Q-function with visit bookkeeping and its binary persistence format.

#ifndef TURNQ_QTABLE_HPP_
#define TURNQ_QTABLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "turnq/game.hpp"

namespace turnq {

struct QEntry {
  ActionId action = 0;
  double value = 0.0;
  std::uint64_t visits = 0;
  bool operator==(const QEntry&) const = default;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Map (state, action) -> value. Absent pairs read as 0.
class QTable {
 public:
  using Row = std::vector<QEntry>;  // sorted by action

  double value(const StateKey& s, ActionId a) const;
  std::uint64_t visits(const StateKey& s, ActionId a) const;
  bool contains(const StateKey& s, ActionId a) const;
  bool contains_state(const StateKey& s) const { return rows_.count(s) != 0; }

  // Inserts a zero-valued entry if absent.
  QEntry& entry(const StateKey& s, ActionId a);
  void set(const StateKey& s, ActionId a, double value) {
    entry(s, a).value = value;
  }

  // nullptr if the state has no entries.
  const Row* row(const StateKey& s) const;

  std::size_t num_states() const { return rows_.size(); }
  std::size_t num_entries() const { return num_entries_; }

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [key, row] : rows_) {
      for (const QEntry& e : row) f(key, e);
    }
  }

  // States in byte-lexicographic order.
  std::vector<StateKey> sorted_states() const;

  // Binary format: "TQL1", u64 entry count, then per entry u32 key length,
  // key bytes, u32 action, f64 value, u64 visits; all little-endian, entries
  // ordered by (key bytes, action).
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static QTable load(std::istream& in);
  static QTable load(const std::string& path);

  friend bool operator==(const QTable& a, const QTable& b) {
    return a.rows_ == b.rows_;
  }

 private:
  std::unordered_map<StateKey, Row, StateKeyHash> rows_;
  std::size_t num_entries_ = 0;
};

}  // namespace turnq

#endif  // TURNQ_QTABLE_HPP_

#include "turnq/qtable.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace turnq {
namespace {

constexpr char kMagic[4] = {'T', 'Q', 'L', '1'};

template <typename T>
void put_le(std::ostream& out, T v) {
  static_assert(std::is_unsigned_v<T>);
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw FormatError(std::string("qtable: truncated while reading ") + what);
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= T{buf[i]} << (8 * i);
  return v;
}

}  // namespace

const QTable::Row* QTable::row(const StateKey& s) const {
  auto it = rows_.find(s);
  return it == rows_.end() ? nullptr : &it->second;
}

static const QEntry* find_in(const QTable::Row& row, ActionId a) {
  auto it = std::lower_bound(row.begin(), row.end(), a,
                             [](const QEntry& e, ActionId x) { return e.action < x; });
  return (it != row.end() && it->action == a) ? &*it : nullptr;
}

double QTable::value(const StateKey& s, ActionId a) const {
  const Row* r = row(s);
  if (!r) return 0.0;
  const QEntry* e = find_in(*r, a);
  return e ? e->value : 0.0;
}

std::uint64_t QTable::visits(const StateKey& s, ActionId a) const {
  const Row* r = row(s);
  if (!r) return 0;
  const QEntry* e = find_in(*r, a);
  return e ? e->visits : 0;
}

bool QTable::contains(const StateKey& s, ActionId a) const {
  const Row* r = row(s);
  return r && find_in(*r, a);
}

QEntry& QTable::entry(const StateKey& s, ActionId a) {
  Row& r = rows_[s];
  auto it = std::lower_bound(r.begin(), r.end(), a,
                             [](const QEntry& e, ActionId x) { return e.action < x; });
  if (it == r.end() || it->action != a) {
    it = r.insert(it, QEntry{a, 0.0, 0});
    ++num_entries_;
  }
  return *it;
}

std::vector<StateKey> QTable::sorted_states() const {
  std::vector<StateKey> keys;
  keys.reserve(rows_.size());
  for (const auto& kv : rows_) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  return keys;
}

void QTable::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint64_t>(out, num_entries_);
  for (const StateKey& k : sorted_states()) {
    for (const QEntry& e : rows_.at(k)) {
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(k.size()));
      out.write(k.bytes.data(), static_cast<std::streamsize>(k.size()));
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.action));
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(e.value));
      put_le<std::uint64_t>(out, e.visits);
    }
  }
}

void QTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save(out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

constexpr std::uint32_t kMaxKeyBytes = 1u << 16;

QTable QTable::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic))) throw FormatError("qtable: missing header");
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw FormatError("qtable: bad magic bytes (expected TQL1)");
  }
  const auto count = get_le<std::uint64_t>(in, "entry count");
  QTable q;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = get_le<std::uint32_t>(in, "key length");
    if (len > kMaxKeyBytes) throw FormatError("qtable: implausible key length");
    std::string bytes(len, '\0');
    if (len && !in.read(bytes.data(), len)) {
      throw FormatError("qtable: truncated key");
    }
    const auto action = get_le<std::uint32_t>(in, "action");
    const auto bits = get_le<std::uint64_t>(in, "value");
    const auto visits = get_le<std::uint64_t>(in, "visits");
    StateKey key(std::move(bytes));
    if (q.contains(key, static_cast<ActionId>(action))) {
      throw FormatError("qtable: duplicate entry");
    }
    QEntry& e = q.entry(key, static_cast<ActionId>(action));
    e.value = std::bit_cast<double>(bits);
    e.visits = visits;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("qtable: trailing bytes after last entry");
  }
  return q;
}

QTable QTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load(in);
}

}  // namespace turnq

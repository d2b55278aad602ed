#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace divcut {

/// Subset of the node universe {0, ..., n-1}, stored as a packed bit vector.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(int universe);
  NodeSet(int universe, std::initializer_list<int> members);
  NodeSet(int universe, std::span<const int> members);

  static NodeSet full(int universe);
  /// Bits of `mask` become members; requires universe <= 64.
  static NodeSet from_mask(int universe, std::uint64_t mask);

  int universe() const { return universe_; }
  bool contains(int v) const {
    return (words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1U;
  }
  void insert(int v);
  void erase(int v);

  int size() const;
  bool empty() const;
  /// Smallest member, or -1 for the empty set.
  int first() const;
  std::vector<int> members() const;
  std::uint64_t mask() const;

  NodeSet complement() const;
  bool is_subset_of(const NodeSet& other) const;
  bool intersects(const NodeSet& other) const;

  NodeSet& operator|=(const NodeSet& other);
  NodeSet& operator&=(const NodeSet& other);
  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend bool operator==(const NodeSet& a, const NodeSet& b) = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check_index(int v) const;
  void clear_padding();

  int universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Order of the sorted member lists, compared lexicographically ({0,2} < {1}).
bool lex_less(const NodeSet& a, const NodeSet& b);

/// Same order on single-word masks.
inline bool lex_less_mask(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  const int v = std::countr_zero(diff);
  const std::uint64_t above = (v >= 63) ? 0 : ~((std::uint64_t{2} << v) - 1);
  if ((a >> v) & 1U) return (b & above) != 0;
  return (a & above) == 0;
}

struct NodeSetHash {
  std::size_t operator()(const NodeSet& s) const noexcept;
};

}  // namespace divcut

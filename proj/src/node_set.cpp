#include "divcut/node_set.hpp"

#include <algorithm>
#include <string>

#include "divcut/errors.hpp"

namespace divcut {

NodeSet::NodeSet(int universe) : universe_(universe) {
  if (universe < 0) throw InvalidArgument("negative universe size");
  words_.assign((static_cast<std::size_t>(universe) + 63) / 64, 0);
}

NodeSet::NodeSet(int universe, std::initializer_list<int> members) : NodeSet(universe) {
  for (int v : members) insert(v);
}

NodeSet::NodeSet(int universe, std::span<const int> members) : NodeSet(universe) {
  for (int v : members) insert(v);
}

NodeSet NodeSet::full(int universe) {
  NodeSet s(universe);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  s.clear_padding();
  return s;
}

NodeSet NodeSet::from_mask(int universe, std::uint64_t mask) {
  if (universe > 64) throw InvalidArgument("from_mask needs a universe of at most 64 nodes");
  NodeSet s(universe);
  if (universe > 0) s.words_[0] = mask;
  s.clear_padding();
  if (s.words_.empty() ? mask != 0 : s.words_[0] != mask)
    throw InvalidArgument("mask has bits outside the universe");
  return s;
}

void NodeSet::check_index(int v) const {
  if (v < 0 || v >= universe_)
    throw InvalidArgument("node " + std::to_string(v) + " outside universe of size " +
                          std::to_string(universe_));
}

void NodeSet::clear_padding() {
  const int rem = universe_ & 63;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

void NodeSet::insert(int v) {
  check_index(v);
  words_[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
}

void NodeSet::erase(int v) {
  check_index(v);
  words_[static_cast<std::size_t>(v) >> 6] &= ~(std::uint64_t{1} << (v & 63));
}

int NodeSet::size() const {
  int total = 0;
  for (auto w : words_) total += std::popcount(w);
  return total;
}

bool NodeSet::empty() const {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

int NodeSet::first() const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] != 0) return static_cast<int>(i * 64) + std::countr_zero(words_[i]);
  return -1;
}

std::vector<int> NodeSet::members() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      out.push_back(static_cast<int>(i * 64) + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return out;
}

std::uint64_t NodeSet::mask() const {
  if (universe_ > 64) throw InvalidArgument("mask() needs a universe of at most 64 nodes");
  return words_.empty() ? 0 : words_[0];
}

NodeSet NodeSet::complement() const {
  NodeSet out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
  if (other.universe_ != universe_) throw InvalidArgument("node set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

bool NodeSet::intersects(const NodeSet& other) const {
  if (other.universe_ != universe_) throw InvalidArgument("node set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & other.words_[i]) != 0) return true;
  return false;
}

NodeSet& NodeSet::operator|=(const NodeSet& other) {
  if (other.universe_ != universe_) throw InvalidArgument("node set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& other) {
  if (other.universe_ != universe_) throw InvalidArgument("node set universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

bool lex_less(const NodeSet& a, const NodeSet& b) {
  const auto ma = a.members();
  const auto mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

std::size_t NodeSetHash::operator()(const NodeSet& s) const noexcept {
  std::size_t h = std::hash<int>{}(s.universe());
  for (auto w : s.words()) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace divcut

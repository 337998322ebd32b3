#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace modae::planning {

using AtomId = std::uint32_t;
using ActionId = std::uint32_t;

/// Truth assignment over the atoms of one task, stored as a packed bitset.
class State {
 public:
  State() = default;
  explicit State(std::size_t atom_count)
      : size_(atom_count), words_((atom_count + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }

  bool test(AtomId atom) const noexcept {
    return (words_[atom >> 6] >> (atom & 63)) & 1u;
  }
  void set(AtomId atom) noexcept { words_[atom >> 6] |= (std::uint64_t{1} << (atom & 63)); }
  void reset(AtomId atom) noexcept { words_[atom >> 6] &= ~(std::uint64_t{1} << (atom & 63)); }

  bool contains_all(std::span<const AtomId> atoms) const noexcept {
    for (AtomId a : atoms) {
      if (!test(a)) return false;
    }
    return true;
  }

  std::size_t count() const noexcept;
  std::vector<AtomId> atoms() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept;
};

}  // namespace modae::planning

#pragma once

#include <bit>
#include <cstdint>

namespace geonarrate {

// Set of base relations of one binary calculus, stored as a bitmask.
// Bit order is the calculus' fixed tag order, so iteration is deterministic.
class RelationSet {
 public:
  using Bits = std::uint16_t;
  static constexpr int kMaxAtoms = 16;

  constexpr RelationSet() = default;
  constexpr explicit RelationSet(Bits bits) : bits_(bits) {}

  static constexpr RelationSet none() { return RelationSet(0); }
  static constexpr RelationSet all(int atom_count) {
    return RelationSet(static_cast<Bits>((1u << atom_count) - 1u));
  }
  static constexpr RelationSet single(int atom) {
    return RelationSet(static_cast<Bits>(1u << atom));
  }

  constexpr Bits bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool singleton() const { return size() == 1; }
  constexpr bool contains(int atom) const { return (bits_ >> atom) & 1u; }
  constexpr bool subset_of(RelationSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  constexpr void insert(int atom) { bits_ |= static_cast<Bits>(1u << atom); }
  constexpr void erase(int atom) { bits_ &= static_cast<Bits>(~(1u << atom)); }

  // Lowest atom index; only meaningful when nonempty.
  constexpr int first() const { return std::countr_zero(bits_); }

  constexpr RelationSet operator|(RelationSet o) const {
    return RelationSet(static_cast<Bits>(bits_ | o.bits_));
  }
  constexpr RelationSet operator&(RelationSet o) const {
    return RelationSet(static_cast<Bits>(bits_ & o.bits_));
  }
  constexpr RelationSet& operator|=(RelationSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr RelationSet& operator&=(RelationSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr bool operator==(const RelationSet&) const = default;

  // Iterates atom indices in ascending tag order.
  class iterator {
   public:
    constexpr explicit iterator(Bits rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= static_cast<Bits>(rest_ - 1);
      return *this;
    }
    constexpr bool operator!=(const iterator& o) const { return rest_ != o.rest_; }

   private:
    Bits rest_;
  };
  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  Bits bits_ = 0;
};

}  // namespace geonarrate

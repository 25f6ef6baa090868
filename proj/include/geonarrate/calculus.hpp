#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geonarrate/relation_set.hpp"

namespace geonarrate {

// RCC-8 base relations in fixed tag order. The order is load-bearing:
// it fixes bit positions, scenario enumeration order, and serialization.
enum class Rcc8 : int {
  dc = 0,
  ec = 1,
  po = 2,
  eq = 3,
  tpp = 4,
  ntpp = 5,
  tppi = 6,
  ntppi = 7,
};
inline constexpr int kRcc8AtomCount = 8;
inline constexpr int atom(Rcc8 r) { return static_cast<int>(r); }
inline constexpr RelationSet rel(Rcc8 r) { return RelationSet::single(atom(r)); }

// Qualitative size relations (total-order point algebra).
enum class SizeRel : int {
  smaller = 0,
  equal = 1,
  larger = 2,
};
inline constexpr int kSizeAtomCount = 3;
inline constexpr int atom(SizeRel r) { return static_cast<int>(r); }
inline constexpr RelationSet rel(SizeRel r) { return RelationSet::single(atom(r)); }

// A binary qualitative calculus: converse and composition tables over a
// JEPD atom set, plus the conceptual neighborhood structure. Instances are
// immutable once built; every lookup is a pure function.
class Calculus {
 public:
  Calculus(std::string name, std::vector<std::string> atom_names, int identity,
           std::vector<int> converse_table, std::vector<RelationSet> composition_table,
           std::vector<RelationSet> neighbor_table);

  const std::string& name() const { return name_; }
  int atom_count() const { return static_cast<int>(atom_names_.size()); }
  int identity() const { return identity_; }
  RelationSet universal() const { return RelationSet::all(atom_count()); }

  const std::string& atom_name(int a) const { return atom_names_[a]; }
  std::optional<int> atom_by_name(std::string_view name) const;

  int converse_atom(int a) const { return converse_[a]; }
  RelationSet converse(RelationSet rs) const;

  RelationSet compose(int a, int b) const { return composition_[a * atom_count() + b]; }
  RelationSet compose(RelationSet lhs, RelationSet rhs) const;

  // Conceptual neighborhood: relations reachable by one continuous change.
  RelationSet neighbors(int a) const { return neighbors_[a]; }
  int cnd_distance(int a, int b) const { return distance_[a * atom_count() + b]; }
  int cnd_diameter() const { return diameter_; }
  // Lift of cnd_distance to a disjunctive origin label: distance from the
  // closest member. Used when measuring repairs against uncertain input.
  int cnd_distance(RelationSet from, int to) const;

  std::string set_to_string(RelationSet rs) const;
  std::optional<RelationSet> set_from_string(std::string_view text) const;

  // Checks the algebraic laws every table must satisfy: converse involution,
  // identity composition, the converse-of-composition law, and connectivity
  // of the neighborhood graph. Throws std::logic_error on violation.
  void validate() const;

  // The embedded calculi.
  static const Calculus& rcc8();
  static const Calculus& size_order();

  // Text format for loading alternative calculi in tests: one line per
  // table entry, `r1 ; r2 ; {r,...}`, with `atoms`, `identity`, `converse`
  // and `neighbor` header lines. See tests for examples.
  static Calculus from_text(std::istream& in);

 private:
  std::string name_;
  std::vector<std::string> atom_names_;
  int identity_;
  std::vector<int> converse_;
  std::vector<RelationSet> composition_;
  std::vector<RelationSet> neighbors_;
  std::vector<int> distance_;
  int diameter_ = 0;
};

// Topology/size interaction: the size relations realizable for region pairs
// standing in a given topological relation (proper parts have strictly
// smaller area, equal regions equal area, all else unconstrained).
RelationSet size_entailed(RelationSet topo);
// Reverse direction: the topological relations compatible with a size label.
RelationSet topo_compatible_with_size(RelationSet size);

}  // namespace geonarrate

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geonarrate/calculus.hpp"
#include "geonarrate/relation_set.hpp"

namespace geonarrate {

struct Variable {
  std::string name;       // unique within the network (e.g. "p", "p'")
  std::string object_id;  // identity; differs from name only for co-referent duplicates
  std::string type;       // object type tag, "" when untyped
  bool exists = true;
  std::string source;     // provenance, optional

  bool coreferent_with(const Variable& other) const {
    return object_id == other.object_id && name != other.name;
  }
};

// Complete labeled constraint graph over object identifiers. A value type:
// operations below take a network and return a new one or a verdict.
// Unset pairs hold the universal relation set; label(j,i) is kept equal to
// converse(label(i,j)) at all times. Variables with exists=false are carried
// along but ignored by closure and consistency.
class ConstraintNetwork {
 public:
  explicit ConstraintNetwork(const Calculus& calc = Calculus::rcc8());

  const Calculus& calculus() const { return *calc_; }
  int size() const { return static_cast<int>(vars_.size()); }

  int add_variable(Variable v);  // throws std::invalid_argument on duplicate name
  int index_of(std::string_view name) const;  // -1 when absent
  const Variable& variable(int i) const { return vars_[i]; }
  Variable& variable(int i) { return vars_[i]; }

  RelationSet label(int i, int j) const;
  void set_label(int i, int j, RelationSet rs);
  void refine_label(int i, int j, RelationSet rs) { set_label(i, j, label(i, j) & rs); }

  bool pair_active(int i, int j) const { return vars_[i].exists && vars_[j].exists; }

  // Unordered pairs (i < j) of existing variables, in index order.
  std::vector<std::pair<int, int>> active_pairs() const;

  bool has_empty_active_label() const;

  // Drops a variable entirely (used when collapsing co-referent duplicates).
  void remove_variable(int i);

  // Canonical byte string of the active part; equal networks on equal
  // variable sets produce equal keys. Used for duplicate-state pruning.
  std::string state_key() const;

  bool operator==(const ConstraintNetwork& other) const;

 private:
  const Calculus* calc_;
  std::vector<Variable> vars_;
  std::unordered_map<std::string, int> index_;
  std::vector<RelationSet> labels_;  // row-major, size() * size()

  RelationSet& at(int i, int j) { return labels_[static_cast<size_t>(i) * vars_.size() + j]; }
  const RelationSet& at(int i, int j) const {
    return labels_[static_cast<size_t>(i) * vars_.size() + j];
  }
};

struct ClosureResult {
  bool consistent = false;
  ConstraintNetwork network;
  // When inconsistent: the pair that became empty and, if it emptied during
  // propagation, the witness third variable of the violated triangle.
  int fail_i = -1, fail_j = -1, fail_via = -1;
};

// Path consistency: fixpoint of label(i,k) &= compose(label(i,j), label(j,k))
// over triples of existing variables. Contracting and idempotent; an empty
// label is reported as an inconsistency verdict, not an error.
ClosureResult algebraic_closure(ConstraintNetwork net);

bool is_scenario(const ConstraintNetwork& net);

// All (or the first `limit`) algebraically closed consistent scenarios
// refining `net`, in deterministic order: pairs in variable-index order,
// relations in tag order. An empty result signals inconsistency.
std::vector<ConstraintNetwork> enumerate_scenarios(const ConstraintNetwork& net,
                                                   std::optional<std::size_t> limit = {});

// For scenarios this equals the closure verdict (complete for RCC-8 base
// relations); disjunctive networks fall back to backtracking search.
bool is_consistent(const ConstraintNetwork& net);

}  // namespace geonarrate

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geonarrate/constraints.hpp"
#include "geonarrate/network.hpp"
#include "geonarrate/qualify.hpp"

namespace geonarrate {

class MergeBudgetExhausted : public std::runtime_error {
 public:
  explicit MergeBudgetExhausted(int budget)
      : std::runtime_error("conflict resolution gave up at repair distance " +
                           std::to_string(budget)),
        budget(budget) {}
  int budget;
};

class MergeUnsatisfiable : public std::runtime_error {
 public:
  MergeUnsatisfiable()
      : std::runtime_error("no consistent constraint-compliant scenario exists") {}
};

// Sum of conceptual-neighborhood distances over all corresponding pairs.
// Both networks must be scenarios over the same variable set.
int scenario_distance(const ConstraintNetwork& s1, const ConstraintNetwork& s2);

// Distance from a scenario to the observed network: per pair, the distance
// to the closest member of the observed label (= plain distance when the
// observation is a scenario).
int distance_to_observation(const ConstraintNetwork& scenario, const ConstraintNetwork& observed);

// All scenarios at exactly distance `i` from the observed network, in
// deterministic order (pairs in index order, relations in tag order).
// Candidates are not consistency-filtered here; resolve applies the filter.
std::vector<ConstraintNetwork> relax(const ConstraintNetwork& observed, int i);

struct MergeResult {
  ConstraintNetwork resolved;
  int distance = 0;
  struct Repair {
    std::string a, b;
    RelationSet before, after;
  };
  std::vector<Repair> repaired_pairs;  // pairs whose final label differs
};

struct MergeOptions {
  // Operational cap on the repair distance. Empty means the exhaustive
  // bound pair_count * cnd_diameter; exceeding a lower cap throws
  // MergeBudgetExhausted, exceeding the exhaustive bound MergeUnsatisfiable.
  std::optional<int> budget;
};

// Distance-based conflict resolution: searches repair distances 0, 1, 2, …
// and returns the pairwise union of all consistent, constraint-compliant
// scenarios at the first nonempty distance.
MergeResult resolve(const ConstraintNetwork& observed,
                    const std::vector<IntegrityConstraint>& ics, const MergeOptions& opts = {});

// Qualify a snapshot, test consistency against the constraints, resolve
// only if that fails, then collapse co-referent duplicate variables.
ConstraintNetwork qualify_and_merge(const Snapshot& snapshot,
                                    const std::vector<IntegrityConstraint>& ics,
                                    const QualifyOptions& qopts = {},
                                    const MergeOptions& mopts = {},
                                    MergeResult* report = nullptr);

// Merges co-referent duplicate variables (p, p', ...) into the plain one,
// intersecting their labels towards every other variable.
ConstraintNetwork collapse_coreferent(const ConstraintNetwork& net);

}  // namespace geonarrate

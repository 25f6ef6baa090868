#pragma once

#include <string>
#include <vector>

#include "geonarrate/network.hpp"

namespace geonarrate {

// Declarative domain knowledge: the relations allowed between objects of
// matching types, e.g. district–district {ec,dc}. Type patterns are exact
// names or `*`; matching is tried in both orientations.
struct IntegrityConstraint {
  std::string name;
  std::string left_type;
  std::string right_type;
  RelationSet allowed;  // nonempty
};

bool constraint_matches(const IntegrityConstraint& ic, const std::string& type_a,
                        const std::string& type_b);

// The label a pair of variables is allowed to take: the intersection of all
// matching constraints' allowed sets. Co-referent duplicate variables are
// pinned to {eq} instead (they denote one object, so type-pair rules do not
// apply to them). Universal when nothing matches.
RelationSet allowed_label(const ConstraintNetwork& net, int i, int j,
                          const std::vector<IntegrityConstraint>& ics);

// Intersects every pair's label with its allowed set. Empty intersections
// are legal here and surface later through consistency checking.
ConstraintNetwork apply_constraints(const ConstraintNetwork& net,
                                    const std::vector<IntegrityConstraint>& ics);

// True when every active label already sits inside its allowed set.
bool compliant(const ConstraintNetwork& net, const std::vector<IntegrityConstraint>& ics);

// Consistency together with the constraints, checked on the closed network
// so that entailed violations count as violations.
bool consistent_with(const ConstraintNetwork& net, const std::vector<IntegrityConstraint>& ics);

}  // namespace geonarrate

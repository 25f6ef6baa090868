#include "geonarrate/constraints.hpp"

namespace geonarrate {

namespace {

bool type_matches(const std::string& pattern, const std::string& type) {
  return pattern == "*" || pattern == type;
}

}  // namespace

bool constraint_matches(const IntegrityConstraint& ic, const std::string& type_a,
                        const std::string& type_b) {
  return (type_matches(ic.left_type, type_a) && type_matches(ic.right_type, type_b)) ||
         (type_matches(ic.left_type, type_b) && type_matches(ic.right_type, type_a));
}

RelationSet allowed_label(const ConstraintNetwork& net, int i, int j,
                          const std::vector<IntegrityConstraint>& ics) {
  const Variable& a = net.variable(i);
  const Variable& b = net.variable(j);
  if (a.coreferent_with(b)) {
    return RelationSet::single(net.calculus().identity());
  }
  RelationSet allowed = net.calculus().universal();
  for (const IntegrityConstraint& ic : ics) {
    if (!constraint_matches(ic, a.type, b.type)) continue;
    // Oriented constraints apply as stated left->right; the converse
    // orientation applies the converse of the allowed set.
    if (type_matches(ic.left_type, a.type) && type_matches(ic.right_type, b.type)) {
      allowed &= ic.allowed;
    }
    if (type_matches(ic.left_type, b.type) && type_matches(ic.right_type, a.type)) {
      allowed &= net.calculus().converse(ic.allowed);
    }
  }
  return allowed;
}

ConstraintNetwork apply_constraints(const ConstraintNetwork& net,
                                    const std::vector<IntegrityConstraint>& ics) {
  ConstraintNetwork out = net;
  for (auto [i, j] : out.active_pairs()) {
    out.refine_label(i, j, allowed_label(out, i, j, ics));
  }
  return out;
}

bool compliant(const ConstraintNetwork& net, const std::vector<IntegrityConstraint>& ics) {
  for (auto [i, j] : net.active_pairs()) {
    if (!net.label(i, j).subset_of(allowed_label(net, i, j, ics))) return false;
  }
  return true;
}

bool consistent_with(const ConstraintNetwork& net, const std::vector<IntegrityConstraint>& ics) {
  ClosureResult r = algebraic_closure(net);
  if (!r.consistent) return false;
  if (!compliant(r.network, ics)) return false;
  if (is_scenario(r.network)) return true;
  // Disjunctive network: a witness scenario must itself stay compliant.
  ConstraintNetwork restricted = apply_constraints(r.network, ics);
  return !enumerate_scenarios(restricted, std::size_t{1}).empty();
}

}  // namespace geonarrate

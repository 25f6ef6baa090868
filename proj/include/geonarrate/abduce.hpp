#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geonarrate/events.hpp"
#include "geonarrate/network.hpp"

namespace geonarrate {

// A qualitative state over one or more calculi: topology always, size when
// modelled. Both networks share the variable set.
struct SpatialState {
  ConstraintNetwork topo;
  std::optional<ConstraintNetwork> size;
};

// Compositional consistency across all modelled calculi plus the
// topology/size interaction entailments.
bool c_consistent(const SpatialState& state);

// Completes a partial description to the tightest labels entailed by
// closure; constrained pairs never loosen. Inconsistent input yields the
// inconsistency verdict.
ClosureResult monotonic_extension(const ConstraintNetwork& partial);

struct InterpolationResult {
  bool found = false;
  // Minimal-length sequences from source to target inclusive; consecutive
  // states differ on each changed pair by at most one conceptual-neighborhood
  // edge and every state is consistent.
  std::vector<std::vector<ConstraintNetwork>> sequences;
};

InterpolationResult interpolate(const ConstraintNetwork& from, const ConstraintNetwork& to,
                                int max_steps);

struct AbduceOptions {
  std::set<EventKind> abducibles = {EventKind::appearance, EventKind::disappearance,
                                    EventKind::split, EventKind::merge, EventKind::transition};
  std::size_t budget = 1'000'000;  // max expanded search nodes
  int max_group = 4;               // split/merge children considered per event
};

// An abduced occurrence with its symbolic time placement: it happens between
// observation `segment` and `segment`+1, at replay position `position`
// (ties in `position` are unordered constituents of one composite event).
struct PlacedEvent {
  EventOccurrence event;
  int segment = 0;   // 1-based index of the source observation
  int position = 0;  // replay order within the segment

  bool operator==(const PlacedEvent&) const = default;
};

struct Explanation {
  // The abduced occurrences, in replay order; cost = moves.size().
  std::vector<PlacedEvent> moves;
  // Presentation records: moves plus the existential constituents entailed
  // by split/merge effects (children disappearances before the result's
  // appearance), mirroring how composite events unfold.
  std::vector<PlacedEvent> records;
  // Strict precedence constraints between record indices.
  std::vector<std::pair<int, int>> orderings;
  int cost = 0;
};

struct ExplainResult {
  bool satisfiable = false;
  bool budget_exhausted = false;
  std::vector<Explanation> explanations;  // cost-minimal, mutually non-subsuming
};

// Narrative completion: minimal event sequences whose replay carries each
// observation into the next. Observation networks assert existence via their
// variable lists (variables absent from a block do not exist there) and
// constrain pairs via non-universal labels.
ExplainResult explain(const std::vector<ConstraintNetwork>& observations,
                      const AbduceOptions& opts = {});

}  // namespace geonarrate

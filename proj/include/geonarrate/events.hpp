#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geonarrate/network.hpp"
#include "geonarrate/timeline.hpp"

namespace geonarrate {

enum class EventKind {
  appearance,
  disappearance,
  split,
  merge,
  growth,
  shrinkage,
  transition,
};

const char* event_kind_name(EventKind k);
std::optional<EventKind> event_kind_by_name(std::string_view name);

struct EventOccurrence {
  EventKind kind = EventKind::appearance;
  // Ordered participants: transition carries the pair; split carries the
  // parent followed by the children; merge the children followed by the
  // result; the rest a single object.
  std::vector<std::string> participants;
  std::optional<Rcc8> target;  // transitions only
  // Snapshot index at which the event's effects hold.
  int time_index = 0;
  bool discontinuous = false;  // transition skipped conceptual neighbors
  bool abduced = false;        // inserted by abduction, not observed
  std::string evidence;

  // Deterministic ordering: time, kind, participants, target.
  bool operator<(const EventOccurrence& other) const;
  bool operator==(const EventOccurrence& other) const;
};

struct StateSlice {
  int time_index = 0;
  ConstraintNetwork network;  // variables carry types and exists flags
};

struct Narrative {
  std::vector<StateSlice> states;  // one per time index, ascending
  std::vector<EventOccurrence> events;

  const StateSlice* state_at(int time_index) const;
  std::string type_of(const std::string& object_id) const;  // "" when unknown
};

struct DetectionConfig {
  double coverage_tol = 0.1;       // split/merge union-vs-whole area tolerance
  double centroid_frac = 0.1;      // centroid displacement, fraction of bbox diagonal
  double area_ratio_threshold = 0.05;  // growth/shrinkage relative change
  double eps = 1e-6;               // boundary tolerance for child adjacency tests
};

// Existence flips between consecutive snapshots: appearance for ids that
// show up, disappearance for ids that vanish.
std::vector<EventOccurrence> detect_existential(const Snapshot& prev, const Snapshot& next);

// A vanished object whose extent is covered by freshly appeared, pairwise
// disconnected-or-touching objects splits into them; merge is the dual.
std::vector<EventOccurrence> detect_split(const Snapshot& prev, const Snapshot& next,
                                          const DetectionConfig& cfg);
std::vector<EventOccurrence> detect_merge(const Snapshot& prev, const Snapshot& next,
                                          const DetectionConfig& cfg);

std::vector<EventOccurrence> detect_growth_shrinkage(const Snapshot& prev, const Snapshot& next,
                                                     double ratio_threshold);

// Relation changes between consecutive qualitative states, for pairs whose
// objects exist in both. Non-neighboring changes are flagged discontinuous.
std::vector<EventOccurrence> detect_transitions(const ConstraintNetwork& prev_net,
                                                const ConstraintNetwork& next_net, int time_index);

// Full detection fold over a timeline and its per-snapshot merged networks.
// Split/merge consume the corresponding appearances and disappearances.
Narrative detect_narrative(const Timeline& timeline, const std::vector<ConstraintNetwork>& networks,
                           const DetectionConfig& cfg);

}  // namespace geonarrate

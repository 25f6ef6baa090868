#include "geonarrate/events.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace geonarrate {

namespace {

const char* kKindNames[] = {"appearance", "disappearance", "split",     "merge",
                            "growth",     "shrinkage",     "transition"};

std::set<std::string> id_set(const Snapshot& s) {
  auto ids = s.object_ids();
  return {ids.begin(), ids.end()};
}

}  // namespace

const char* event_kind_name(EventKind k) { return kKindNames[static_cast<int>(k)]; }

std::optional<EventKind> event_kind_by_name(std::string_view name) {
  for (int k = 0; k < 7; ++k) {
    if (name == kKindNames[k]) return static_cast<EventKind>(k);
  }
  return std::nullopt;
}

bool EventOccurrence::operator<(const EventOccurrence& other) const {
  if (time_index != other.time_index) return time_index < other.time_index;
  if (kind != other.kind) return kind < other.kind;
  if (participants != other.participants) return participants < other.participants;
  return target < other.target;
}

bool EventOccurrence::operator==(const EventOccurrence& other) const {
  return kind == other.kind && participants == other.participants && target == other.target &&
         time_index == other.time_index;
}

const StateSlice* Narrative::state_at(int time_index) const {
  for (const StateSlice& s : states) {
    if (s.time_index == time_index) return &s;
  }
  return nullptr;
}

std::string Narrative::type_of(const std::string& object_id) const {
  for (const StateSlice& s : states) {
    int i = s.network.index_of(object_id);
    if (i >= 0) return s.network.variable(i).type;
  }
  return "";
}

std::vector<EventOccurrence> detect_existential(const Snapshot& prev, const Snapshot& next) {
  std::vector<EventOccurrence> out;
  auto before = id_set(prev);
  auto after = id_set(next);
  for (const std::string& id : after) {
    if (!before.count(id)) {
      out.push_back({EventKind::appearance, {id}, std::nullopt, next.time_index, false, false,
                     "absent in t" + std::to_string(prev.time_index)});
    }
  }
  for (const std::string& id : before) {
    if (!after.count(id)) {
      out.push_back({EventKind::disappearance, {id}, std::nullopt, next.time_index, false, false,
                     "present in t" + std::to_string(prev.time_index)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Shared engine for split and merge: `whole` vanished/appeared on one side
// while `parts` did the opposite, parts lie mostly within the whole, are
// pairwise dc/ec, and jointly cover it.
struct PartitionMatch {
  std::vector<std::string> parts;
  bool ok = false;
};

PartitionMatch match_partition(const Region& whole, const Snapshot& parts_snapshot,
                               const std::set<std::string>& candidate_ids,
                               const DetectionConfig& cfg) {
  PartitionMatch m;
  std::vector<const Region*> part_regions;
  for (const std::string& id : candidate_ids) {
    const TimedFeature* f = parts_snapshot.primary_feature(id);
    if (!f) continue;
    // A part must lie essentially inside the whole.
    if (intersection_area(f->geometry, whole) < (1.0 - cfg.coverage_tol) * f->geometry.area()) {
      continue;
    }
    m.parts.push_back(id);
    part_regions.push_back(&f->geometry);
  }
  if (m.parts.size() < 2) return m;
  // Pairwise disconnected or externally connected.
  for (size_t i = 0; i < part_regions.size(); ++i) {
    for (size_t j = i + 1; j < part_regions.size(); ++j) {
      Rcc8 r = qualify_pair(*part_regions[i], *part_regions[j], cfg.eps);
      if (r != Rcc8::dc && r != Rcc8::ec) return m;
    }
  }
  double coverage = union_area(part_regions) / whole.area();
  if (coverage < 1.0 - cfg.coverage_tol || coverage > 1.0 + cfg.coverage_tol) return m;
  Point uc = union_centroid(part_regions);
  Point wc = whole.centroid();
  double displacement = std::hypot(uc.x - wc.x, uc.y - wc.y);
  if (displacement > cfg.centroid_frac * whole.bbox().diagonal()) return m;
  m.ok = true;
  return m;
}

}  // namespace

std::vector<EventOccurrence> detect_split(const Snapshot& prev, const Snapshot& next,
                                          const DetectionConfig& cfg) {
  std::vector<EventOccurrence> out;
  auto before = id_set(prev);
  auto after = id_set(next);
  std::set<std::string> fresh;
  for (const std::string& id : after) {
    if (!before.count(id)) fresh.insert(id);
  }
  for (const std::string& parent : before) {
    if (after.count(parent)) continue;  // split requires the parent to vanish
    const TimedFeature* pf = prev.primary_feature(parent);
    if (!pf) continue;
    PartitionMatch m = match_partition(pf->geometry, next, fresh, cfg);
    if (!m.ok) continue;
    EventOccurrence ev;
    ev.kind = EventKind::split;
    ev.participants.push_back(parent);
    for (const std::string& c : m.parts) ev.participants.push_back(c);
    ev.time_index = next.time_index;
    ev.evidence = "children cover parent extent";
    out.push_back(std::move(ev));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EventOccurrence> detect_merge(const Snapshot& prev, const Snapshot& next,
                                          const DetectionConfig& cfg) {
  std::vector<EventOccurrence> out;
  auto before = id_set(prev);
  auto after = id_set(next);
  std::set<std::string> vanished;
  for (const std::string& id : before) {
    if (!after.count(id)) vanished.insert(id);
  }
  for (const std::string& result : after) {
    if (before.count(result)) continue;  // merge result must be new
    const TimedFeature* rf = next.primary_feature(result);
    if (!rf) continue;
    PartitionMatch m = match_partition(rf->geometry, prev, vanished, cfg);
    if (!m.ok) continue;
    EventOccurrence ev;
    ev.kind = EventKind::merge;
    for (const std::string& c : m.parts) ev.participants.push_back(c);
    ev.participants.push_back(result);
    ev.time_index = next.time_index;
    ev.evidence = "children cover result extent";
    out.push_back(std::move(ev));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EventOccurrence> detect_growth_shrinkage(const Snapshot& prev, const Snapshot& next,
                                                     double ratio_threshold) {
  std::vector<EventOccurrence> out;
  for (const std::string& id : next.object_ids()) {
    const TimedFeature* before = prev.primary_feature(id);
    const TimedFeature* after = next.primary_feature(id);
    if (!before || !after) continue;
    double ratio = after->geometry.area() / before->geometry.area();
    if (ratio > 1.0 + ratio_threshold) {
      out.push_back({EventKind::growth, {id}, std::nullopt, next.time_index, false, false,
                     "area ratio " + std::to_string(ratio)});
    } else if (ratio < 1.0 - ratio_threshold) {
      out.push_back({EventKind::shrinkage, {id}, std::nullopt, next.time_index, false, false,
                     "area ratio " + std::to_string(ratio)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EventOccurrence> detect_transitions(const ConstraintNetwork& prev_net,
                                                const ConstraintNetwork& next_net,
                                                int time_index) {
  const Calculus& calc = prev_net.calculus();
  std::vector<EventOccurrence> out;
  for (auto [i, j] : next_net.active_pairs()) {
    const std::string& a = next_net.variable(i).name;
    const std::string& b = next_net.variable(j).name;
    int pi = prev_net.index_of(a);
    int pj = prev_net.index_of(b);
    if (pi < 0 || pj < 0) continue;
    if (!prev_net.variable(pi).exists || !prev_net.variable(pj).exists) continue;
    RelationSet before = prev_net.label(pi, pj);
    RelationSet after = next_net.label(i, j);
    if (!before.singleton() || !after.singleton()) continue;
    if (before == after) continue;
    EventOccurrence ev;
    ev.kind = EventKind::transition;
    ev.participants = {a, b};
    ev.target = static_cast<Rcc8>(after.first());
    ev.time_index = time_index;
    ev.discontinuous = calc.cnd_distance(before.first(), after.first()) > 1;
    ev.evidence = calc.set_to_string(before) + " -> " + calc.set_to_string(after);
    out.push_back(std::move(ev));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Narrative detect_narrative(const Timeline& timeline, const std::vector<ConstraintNetwork>& networks,
                           const DetectionConfig& cfg) {
  Narrative n;
  for (size_t k = 0; k < timeline.snapshots.size(); ++k) {
    n.states.push_back({timeline.snapshots[k].time_index, networks[k]});
  }
  for (size_t k = 0; k + 1 < timeline.snapshots.size(); ++k) {
    const Snapshot& prev = timeline.snapshots[k];
    const Snapshot& next = timeline.snapshots[k + 1];

    auto splits = detect_split(prev, next, cfg);
    auto merges = detect_merge(prev, next, cfg);
    // Ids consumed by a split or merge do not also appear or disappear.
    std::set<std::string> consumed;
    for (const auto& ev : splits) consumed.insert(ev.participants.begin(), ev.participants.end());
    for (const auto& ev : merges) consumed.insert(ev.participants.begin(), ev.participants.end());

    for (auto& ev : detect_existential(prev, next)) {
      if (!consumed.count(ev.participants[0])) n.events.push_back(std::move(ev));
    }
    for (auto& ev : splits) n.events.push_back(std::move(ev));
    for (auto& ev : merges) n.events.push_back(std::move(ev));
    for (auto& ev : detect_growth_shrinkage(prev, next, cfg.area_ratio_threshold)) {
      n.events.push_back(std::move(ev));
    }
    for (auto& ev : detect_transitions(networks[k], networks[k + 1], next.time_index)) {
      n.events.push_back(std::move(ev));
    }
  }
  std::sort(n.events.begin(), n.events.end());
  return n;
}

}  // namespace geonarrate

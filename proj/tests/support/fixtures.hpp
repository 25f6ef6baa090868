#pragma once

// Small builders shared by the test suites.

#include <string>
#include <vector>

#include "geonarrate/timeline.hpp"

namespace geonarrate::testing {

inline Region rect(double x0, double y0, double x1, double y1) {
  return Region::from_rings({{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}});
}

inline TimedFeature feature(std::string id, std::string type, std::string timestamp, Region geom,
                            std::string source = "s1") {
  TimedFeature f;
  f.object_id = std::move(id);
  f.object_type = std::move(type);
  f.source_id = std::move(source);
  f.timestamp_raw = std::move(timestamp);
  f.timestamp_us = parse_instant_utc(f.timestamp_raw);
  f.geometry = std::move(geom);
  return f;
}

inline Snapshot snapshot_of(int index, std::vector<TimedFeature> features) {
  Snapshot s;
  s.time_index = index;
  s.representative_us = features.empty() ? 0 : features.front().timestamp_us;
  s.features = std::move(features);
  return s;
}

}  // namespace geonarrate::testing

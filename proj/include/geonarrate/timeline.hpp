#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geonarrate/geometry.hpp"

namespace geonarrate {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimedFeature {
  std::string object_id;
  std::string object_type;
  std::string source_id;
  std::string timestamp_raw;   // original string, kept for provenance
  std::int64_t timestamp_us = 0;  // UTC microseconds since the Unix epoch
  Region geometry;
};

struct Snapshot {
  int time_index = 0;  // 1-based, contiguous
  std::int64_t representative_us = 0;
  std::vector<TimedFeature> features;  // possibly several per object_id

  std::vector<std::string> object_ids() const;  // distinct, sorted
  const TimedFeature* primary_feature(const std::string& object_id) const;
};

struct Timeline {
  std::vector<Snapshot> snapshots;
};

struct PartitionPolicy {
  enum class Kind { gap, window };
  Kind kind = Kind::gap;
  // Gap threshold or window width. Empty under the gap policy means
  // auto: half the median gap between consecutive distinct timestamps.
  std::optional<std::int64_t> param_us;

  static PartitionPolicy parse(std::string_view text);  // "gap:<dur>", "window:<dur>", "auto"
};

// Assigns every feature to exactly one snapshot. Gap policy: single-linkage
// clustering of timestamps, splitting where consecutive gaps exceed the
// threshold. Window policy: fixed-width buckets anchored at the earliest
// timestamp. Snapshot order follows time; features within a snapshot keep
// a deterministic (id, source) order.
Timeline partition(std::vector<TimedFeature> features, const PartitionPolicy& policy);

// Strict ISO-8601 UTC instant: YYYY-MM-DD[Thh:mm[:ss[.frac]]][Z|±hh[:mm]].
// Throws ParseError on malformed input.
std::int64_t parse_instant_utc(std::string_view text);
std::string format_instant_utc(std::int64_t us);

// Durations like "90s", "15m", "2h", "10d". Throws ParseError.
std::int64_t parse_duration_us(std::string_view text);

}  // namespace geonarrate

#include "geonarrate/timeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace geonarrate {

namespace {

constexpr std::int64_t kUsPerSecond = 1'000'000;

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

int parse_fixed_int(std::string_view s, size_t pos, size_t len) {
  if (pos + len > s.size()) throw ParseError("timestamp too short: " + std::string(s));
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, value);
  if (ec != std::errc() || ptr != s.data() + pos + len) {
    throw ParseError("bad number in timestamp: " + std::string(s));
  }
  return value;
}

}  // namespace

std::int64_t parse_instant_utc(std::string_view text) {
  // YYYY-MM-DD
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("unparseable timestamp: " + std::string(text));
  }
  int year = parse_fixed_int(text, 0, 4);
  int month = parse_fixed_int(text, 5, 2);
  int day = parse_fixed_int(text, 8, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31) {
    throw ParseError("timestamp out of range: " + std::string(text));
  }
  size_t pos = 10;
  int hour = 0, minute = 0, second = 0;
  std::int64_t fraction_us = 0;
  if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
    ++pos;
    hour = parse_fixed_int(text, pos, 2);
    if (pos + 2 >= text.size() || text[pos + 2] != ':') {
      throw ParseError("unparseable timestamp: " + std::string(text));
    }
    minute = parse_fixed_int(text, pos + 3, 2);
    pos += 5;
    if (pos < text.size() && text[pos] == ':') {
      second = parse_fixed_int(text, pos + 1, 2);
      pos += 3;
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::int64_t scale = 100000;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
          if (scale > 0) fraction_us += (text[pos] - '0') * scale;
          scale /= 10;
          ++pos;
        }
      }
    }
    if (hour > 23 || minute > 59 || second > 60) {
      throw ParseError("timestamp out of range: " + std::string(text));
    }
  }
  std::int64_t offset_us = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
      int sign = text[pos] == '+' ? 1 : -1;
      int oh = parse_fixed_int(text, pos + 1, 2);
      int om = 0;
      pos += 3;
      if (pos < text.size() && text[pos] == ':') {
        om = parse_fixed_int(text, pos + 1, 2);
        pos += 3;
      }
      offset_us = sign * (oh * 3600LL + om * 60LL) * kUsPerSecond;
    }
  }
  if (pos != text.size()) throw ParseError("trailing garbage in timestamp: " + std::string(text));
  std::int64_t days = days_from_civil(year, month, day);
  std::int64_t us =
      days * 86400 * kUsPerSecond + (hour * 3600LL + minute * 60LL + second) * kUsPerSecond +
      fraction_us;
  return us - offset_us;
}

std::string format_instant_utc(std::int64_t us) {
  std::int64_t days = us / (86400 * kUsPerSecond);
  std::int64_t rem = us - days * 86400 * kUsPerSecond;
  if (rem < 0) {
    rem += 86400 * kUsPerSecond;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  int hour = static_cast<int>(rem / (3600 * kUsPerSecond));
  rem -= static_cast<std::int64_t>(hour) * 3600 * kUsPerSecond;
  int minute = static_cast<int>(rem / (60 * kUsPerSecond));
  rem -= static_cast<std::int64_t>(minute) * 60 * kUsPerSecond;
  int second = static_cast<int>(rem / kUsPerSecond);
  std::int64_t frac = rem - static_cast<std::int64_t>(second) * kUsPerSecond;
  char buf[48];
  if (frac == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d, hour, minute, second);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", y, m, d, hour, minute,
                  second, static_cast<long long>(frac));
  }
  return buf;
}

std::int64_t parse_duration_us(std::string_view text) {
  if (text.empty()) throw ParseError("empty duration");
  double value = 0;
  size_t unit_pos = 0;
  {
    std::string head(text);
    char* end = nullptr;
    value = std::strtod(head.c_str(), &end);
    unit_pos = static_cast<size_t>(end - head.c_str());
  }
  if (unit_pos == 0 || unit_pos + 1 != text.size()) {
    throw ParseError("bad duration (want <number><s|m|h|d>): " + std::string(text));
  }
  double scale;
  switch (text[unit_pos]) {
    case 's': scale = 1; break;
    case 'm': scale = 60; break;
    case 'h': scale = 3600; break;
    case 'd': scale = 86400; break;
    default: throw ParseError("bad duration unit: " + std::string(text));
  }
  return static_cast<std::int64_t>(std::llround(value * scale * kUsPerSecond));
}

PartitionPolicy PartitionPolicy::parse(std::string_view text) {
  PartitionPolicy p;
  if (text == "auto" || text.empty()) return p;
  auto colon = text.find(':');
  std::string_view kind = text.substr(0, colon);
  if (kind == "gap") {
    p.kind = Kind::gap;
  } else if (kind == "window") {
    p.kind = Kind::window;
  } else {
    throw ParseError("bad partition policy (want gap:<dur> or window:<dur>): " + std::string(text));
  }
  if (colon == std::string_view::npos) {
    if (p.kind == Kind::window) throw ParseError("window policy needs a width");
    return p;
  }
  p.param_us = parse_duration_us(text.substr(colon + 1));
  return p;
}

std::vector<std::string> Snapshot::object_ids() const {
  std::set<std::string> ids;
  for (const TimedFeature& f : features) ids.insert(f.object_id);
  return {ids.begin(), ids.end()};
}

const TimedFeature* Snapshot::primary_feature(const std::string& object_id) const {
  const TimedFeature* best = nullptr;
  for (const TimedFeature& f : features) {
    if (f.object_id != object_id) continue;
    if (!best || f.source_id < best->source_id) best = &f;
  }
  return best;
}

Timeline partition(std::vector<TimedFeature> features, const PartitionPolicy& policy) {
  if (features.empty()) throw ParseError("no features to partition");
  std::stable_sort(features.begin(), features.end(),
                   [](const TimedFeature& a, const TimedFeature& b) {
                     if (a.timestamp_us != b.timestamp_us) return a.timestamp_us < b.timestamp_us;
                     if (a.object_id != b.object_id) return a.object_id < b.object_id;
                     return a.source_id < b.source_id;
                   });

  std::vector<std::vector<TimedFeature>> groups;
  if (policy.kind == PartitionPolicy::Kind::window) {
    std::int64_t width = policy.param_us.value();
    if (width <= 0) throw ParseError("window width must be positive");
    std::int64_t anchor = features.front().timestamp_us;
    std::int64_t current_bucket = 0;
    for (TimedFeature& f : features) {
      std::int64_t bucket = (f.timestamp_us - anchor) / width;
      if (groups.empty() || bucket != current_bucket) {
        groups.emplace_back();
        current_bucket = bucket;
      }
      groups.back().push_back(std::move(f));
    }
  } else {
    std::int64_t threshold;
    if (policy.param_us) {
      threshold = *policy.param_us;
    } else {
      // Auto threshold: half the median gap between distinct timestamps.
      std::vector<std::int64_t> stamps;
      for (const TimedFeature& f : features) {
        if (stamps.empty() || stamps.back() != f.timestamp_us) stamps.push_back(f.timestamp_us);
      }
      if (stamps.size() < 2) {
        threshold = 0;
      } else {
        std::vector<std::int64_t> gaps;
        for (size_t i = 1; i < stamps.size(); ++i) gaps.push_back(stamps[i] - stamps[i - 1]);
        std::sort(gaps.begin(), gaps.end());
        threshold = gaps[gaps.size() / 2] / 2;
      }
    }
    for (TimedFeature& f : features) {
      if (groups.empty() || f.timestamp_us - groups.back().back().timestamp_us > threshold) {
        groups.emplace_back();
      }
      groups.back().push_back(std::move(f));
    }
  }

  Timeline timeline;
  int index = 1;
  for (auto& group : groups) {
    Snapshot snap;
    snap.time_index = index++;
    snap.representative_us = group.front().timestamp_us;
    snap.features = std::move(group);
    std::stable_sort(snap.features.begin(), snap.features.end(),
                     [](const TimedFeature& a, const TimedFeature& b) {
                       if (a.object_id != b.object_id) return a.object_id < b.object_id;
                       return a.source_id < b.source_id;
                     });
    timeline.snapshots.push_back(std::move(snap));
  }
  return timeline;
}

}  // namespace geonarrate

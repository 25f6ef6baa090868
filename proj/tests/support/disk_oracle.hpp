#pragma once

// Disk-based oracles, independent of the calculus tables under test.
// Relations between disks follow from center distance and radii alone, so
// classification here is pure arithmetic. Tangent configurations are built
// constructively (distance set to the exact sum/difference of radii) and
// detected with a band far wider than construction error yet far narrower
// than anything random sampling produces.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "geonarrate/calculus.hpp"
#include "geonarrate/geometry.hpp"

namespace geonarrate::testing {

inline constexpr double kTangencyBand = 1e-9;

struct Disk {
  double cx = 0, cy = 0, r = 1;
};

inline std::uint64_t oracle_seed() {
  if (const char* env = std::getenv("GEONARRATE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 20260810ull;
}

inline double center_distance(const Disk& a, const Disk& b) {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

inline Rcc8 classify_disks(const Disk& a, const Disk& b) {
  const double d = center_distance(a, b);
  const double sum = a.r + b.r;
  const double diff = std::abs(a.r - b.r);
  if (std::abs(a.r - b.r) <= kTangencyBand && d <= kTangencyBand) return Rcc8::eq;
  if (d > sum + kTangencyBand) return Rcc8::dc;
  if (std::abs(d - sum) <= kTangencyBand) return Rcc8::ec;
  if (d > diff + kTangencyBand) return Rcc8::po;
  const bool a_smaller = a.r < b.r;
  if (std::abs(d - diff) <= kTangencyBand) return a_smaller ? Rcc8::tpp : Rcc8::tppi;
  return a_smaller ? Rcc8::ntpp : Rcc8::ntppi;
}

inline Disk random_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  std::uniform_real_distribution<double> radius(0.2, 5.0);
  return {pos(rng), pos(rng), radius(rng)};
}

// A disk standing in the requested relation to `a`. Tangencies are placed
// along one of the four axis directions so the distance is exact.
inline Disk disk_with_relation(const Disk& a, Rcc8 relation, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> axis_pick(0, 3);
  const double axes[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double* axis = axes[axis_pick(rng)];
  auto place_at = [&](double distance, double radius) {
    return Disk{a.cx + axis[0] * distance, a.cy + axis[1] * distance, radius};
  };
  std::uniform_real_distribution<double> radius(0.2, 5.0);
  double r = radius(rng);
  switch (relation) {
    case Rcc8::dc:
      return place_at((a.r + r) * (1.2 + unit(rng)), r);
    case Rcc8::ec:
      return place_at(a.r + r, r);
    case Rcc8::po: {
      double lo = std::abs(a.r - r), hi = a.r + r;
      double margin = 0.05 * (hi - lo);
      return place_at(lo + margin + unit(rng) * (hi - lo - 2 * margin), r);
    }
    case Rcc8::eq:
      return a;
    case Rcc8::tpp: {
      double rb = a.r * (1.5 + unit(rng));
      return place_at(rb - a.r, rb);
    }
    case Rcc8::ntpp: {
      double rb = a.r * (2.0 + unit(rng));
      return place_at(unit(rng) * (rb - a.r) * 0.8, rb);
    }
    case Rcc8::tppi: {
      double rb = a.r / (1.5 + unit(rng));
      return place_at(a.r - rb, rb);
    }
    case Rcc8::ntppi: {
      double rb = a.r / (2.0 + unit(rng));
      return place_at(unit(rng) * (a.r - rb) * 0.8, rb);
    }
  }
  return a;
}

// Relation sequence observed while `moving` travels in a straight line past
// `fixed`. Samples every instant at which the center distance crosses a
// classification threshold, plus midpoints between them, so no relation on
// the way is skipped.
inline std::vector<Rcc8> motion_relation_sequence(const Disk& fixed, const Disk& moving_start,
                                                  double dir_x, double dir_y) {
  const double sx = moving_start.cx - fixed.cx;
  const double sy = moving_start.cy - fixed.cy;
  const double qa = dir_x * dir_x + dir_y * dir_y;
  const double qb = 2.0 * (sx * dir_x + sy * dir_y);
  std::vector<double> samples{0.0, 1.0};
  const double sum = fixed.r + moving_start.r;
  const double diff = std::abs(fixed.r - moving_start.r);
  for (double threshold : {sum, diff, 0.0}) {
    const double qc = sx * sx + sy * sy - threshold * threshold;
    const double disc = qb * qb - 4 * qa * qc;
    if (disc < 0) continue;
    const double root = std::sqrt(disc);
    for (double t : {(-qb - root) / (2 * qa), (-qb + root) / (2 * qa)}) {
      if (t > 0 && t < 1) samples.push_back(t);
    }
  }
  std::sort(samples.begin(), samples.end());
  std::vector<double> instants;
  for (size_t i = 0; i < samples.size(); ++i) {
    instants.push_back(samples[i]);
    if (i + 1 < samples.size()) instants.push_back(0.5 * (samples[i] + samples[i + 1]));
  }
  std::vector<Rcc8> sequence;
  for (double t : instants) {
    Disk at{moving_start.cx + t * dir_x, moving_start.cy + t * dir_y, moving_start.r};
    Rcc8 rel = classify_disks(fixed, at);
    if (sequence.empty() || sequence.back() != rel) sequence.push_back(rel);
  }
  return sequence;
}

// Fine polygonal rendering of a disk, for qualifier/oracle comparisons.
inline Region polygonize(const Disk& d, int segments = 256) {
  std::vector<Point> ring;
  for (int k = 0; k < segments; ++k) {
    double angle = 2.0 * M_PI * k / segments;
    ring.push_back({d.cx + d.r * std::cos(angle), d.cy + d.r * std::sin(angle)});
  }
  return Region::from_rings({ring});
}

}  // namespace geonarrate::testing

#pragma once

// Brute-force reference implementations used as independent oracles. They
// enumerate complete atomic assignments and check composition triangles by
// direct table lookup, with no propagation, pruning, or sharing with the
// production search paths.

#include <functional>
#include <optional>
#include <vector>

#include "geonarrate/constraints.hpp"
#include "geonarrate/merge.hpp"
#include "geonarrate/network.hpp"

#include "support/disk_oracle.hpp"

namespace geonarrate::testing {

// Every complete atomic assignment refining `net` whose triangles all
// satisfy rel(i,k) in compose(rel(i,j), rel(j,k)). For RCC-8 atomic
// networks triangle-closedness coincides with consistency.
inline std::vector<ConstraintNetwork> brute_scenarios(const ConstraintNetwork& net) {
  const Calculus& calc = net.calculus();
  auto pairs = net.active_pairs();
  std::vector<ConstraintNetwork> found;
  std::vector<int> choice(pairs.size(), -1);

  std::function<void(size_t, ConstraintNetwork&)> walk = [&](size_t p, ConstraintNetwork& cur) {
    if (p == pairs.size()) {
      found.push_back(cur);
      return;
    }
    auto [i, j] = pairs[p];
    for (int a : net.label(i, j)) {
      cur.set_label(i, j, RelationSet::single(a));
      // Check triangles that became fully assigned, against earlier pairs.
      bool fine = true;
      for (size_t q = 0; fine && q <= p; ++q) {
        auto [x, y] = pairs[q];
        for (int z = 0; fine && z < cur.size(); ++z) {
          if (z == x || z == y || !cur.variable(z).exists) continue;
          RelationSet xz = cur.label(x, z), zy = cur.label(z, y);
          if (!xz.singleton() || !zy.singleton()) continue;
          if (!calc.compose(xz, zy).contains(cur.label(x, y).first())) fine = false;
        }
      }
      if (fine) walk(p + 1, cur);
    }
    cur.set_label(i, j, net.label(i, j));
  };
  ConstraintNetwork cur = net;
  walk(0, cur);
  return found;
}

inline bool brute_consistent(const ConstraintNetwork& net) { return !brute_scenarios(net).empty(); }

// Reference for the distance-based resolution operator: enumerate every
// consistent, constraint-compliant scenario, take those at minimal lifted
// distance from the observation, and union them.
struct BruteMerge {
  bool satisfiable = false;
  int distance = 0;
  ConstraintNetwork resolved;
};

inline BruteMerge brute_resolve(const ConstraintNetwork& observed,
                                const std::vector<IntegrityConstraint>& ics) {
  const Calculus& calc = observed.calculus();
  ConstraintNetwork full = observed;
  for (auto [i, j] : full.active_pairs()) full.set_label(i, j, calc.universal());

  BruteMerge out;
  out.resolved = observed;
  std::vector<ConstraintNetwork> minimal;
  for (const ConstraintNetwork& s : brute_scenarios(full)) {
    if (!compliant(s, ics)) continue;
    int d = 0;
    for (auto [i, j] : s.active_pairs()) {
      d += calc.cnd_distance(observed.label(i, j), s.label(i, j).first());
    }
    if (!out.satisfiable || d < out.distance) {
      out.satisfiable = true;
      out.distance = d;
      minimal.clear();
    }
    if (d == out.distance) minimal.push_back(s);
  }
  if (!out.satisfiable) return out;
  for (auto [i, j] : out.resolved.active_pairs()) {
    RelationSet u;
    for (const ConstraintNetwork& s : minimal) u |= s.label(i, j);
    out.resolved.set_label(i, j, u);
  }
  return out;
}

// Randomized search for a disk configuration realizing the network: a found
// witness proves consistency (the converse direction needs enumeration).
inline bool find_disk_witness(const ConstraintNetwork& net, std::mt19937_64& rng,
                              int attempts = 20000) {
  auto pairs = net.active_pairs();
  std::vector<int> active;
  for (int i = 0; i < net.size(); ++i) {
    if (net.variable(i).exists) active.push_back(i);
  }
  std::vector<Disk> disks(net.size());
  for (int attempt = 0; attempt < attempts; ++attempt) {
    for (int i : active) disks[i] = random_disk(rng);
    // Nudge half the attempts towards coincidence-heavy layouts.
    if (attempt % 2 == 1 && active.size() >= 2) {
      for (size_t k = 1; k < active.size(); ++k) {
        if (rng() % 2) {
          Rcc8 want = static_cast<Rcc8>(net.label(active[0], active[k]).first());
          disks[active[k]] = disk_with_relation(disks[active[0]], want, rng);
        }
      }
    }
    bool ok = true;
    for (auto [i, j] : pairs) {
      if (!net.label(i, j).contains(atom(classify_disks(disks[i], disks[j])))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace geonarrate::testing

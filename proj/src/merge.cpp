#include "geonarrate/merge.hpp"

#include <algorithm>
#include <stdexcept>

namespace geonarrate {

namespace {

void check_same_variables(const ConstraintNetwork& a, const ConstraintNetwork& b) {
  if (a.size() != b.size()) throw std::invalid_argument("networks have different variable sets");
  for (int i = 0; i < a.size(); ++i) {
    if (a.variable(i).name != b.variable(i).name) {
      throw std::invalid_argument("networks have different variable sets");
    }
  }
}

}  // namespace

int scenario_distance(const ConstraintNetwork& s1, const ConstraintNetwork& s2) {
  check_same_variables(s1, s2);
  const Calculus& calc = s1.calculus();
  int total = 0;
  for (auto [i, j] : s1.active_pairs()) {
    RelationSet a = s1.label(i, j);
    RelationSet b = s2.label(i, j);
    if (!a.singleton() || !b.singleton()) {
      throw std::invalid_argument("scenario_distance needs singleton labels");
    }
    total += calc.cnd_distance(a.first(), b.first());
  }
  return total;
}

int distance_to_observation(const ConstraintNetwork& scenario,
                            const ConstraintNetwork& observed) {
  check_same_variables(scenario, observed);
  const Calculus& calc = scenario.calculus();
  int total = 0;
  for (auto [i, j] : scenario.active_pairs()) {
    RelationSet s = scenario.label(i, j);
    if (!s.singleton()) throw std::invalid_argument("distance_to_observation needs a scenario");
    total += calc.cnd_distance(observed.label(i, j), s.first());
  }
  return total;
}

std::vector<ConstraintNetwork> relax(const ConstraintNetwork& observed, int budget) {
  const Calculus& calc = observed.calculus();
  auto pairs = observed.active_pairs();
  const int n_pairs = static_cast<int>(pairs.size());

  // Per pair and per distance d, the relations whose lifted distance from the
  // observed label is exactly d.
  std::vector<std::vector<RelationSet>> at_distance(n_pairs);
  std::vector<int> max_distance(n_pairs, 0);
  for (int p = 0; p < n_pairs; ++p) {
    auto [i, j] = pairs[p];
    RelationSet obs = observed.label(i, j);
    at_distance[p].assign(calc.cnd_diameter() + 1, RelationSet());
    for (int a = 0; a < calc.atom_count(); ++a) {
      int d = obs.empty() ? 0 : calc.cnd_distance(obs, a);
      at_distance[p][d].insert(a);
      max_distance[p] = std::max(max_distance[p], d);
    }
  }
  // Suffix sums of the achievable distance for budget pruning.
  std::vector<int> suffix_max(n_pairs + 1, 0);
  for (int p = n_pairs - 1; p >= 0; --p) suffix_max[p] = suffix_max[p + 1] + max_distance[p];

  std::vector<ConstraintNetwork> out;
  ConstraintNetwork current = observed;
  // Assign a repair distance to every pair, in pair order; within a pair the
  // candidate relations come out in tag order.
  auto descend = [&](auto&& self, int p, int remaining) -> void {
    if (p == n_pairs) {
      if (remaining == 0) out.push_back(current);
      return;
    }
    auto [i, j] = pairs[p];
    int limit = std::min(remaining, max_distance[p]);
    for (int d = 0; d <= limit; ++d) {
      if (remaining - d > suffix_max[p + 1]) continue;  // unreachable
      for (int a : at_distance[p][d]) {
        current.set_label(i, j, RelationSet::single(a));
        self(self, p + 1, remaining - d);
      }
    }
    current.set_label(i, j, observed.label(i, j));
  };
  if (n_pairs == 0) {
    if (budget == 0) out.push_back(observed);
    return out;
  }
  descend(descend, 0, budget);
  return out;
}

MergeResult resolve(const ConstraintNetwork& observed,
                    const std::vector<IntegrityConstraint>& ics, const MergeOptions& opts) {
  const int n_pairs = static_cast<int>(observed.active_pairs().size());
  const int exhaustive = n_pairs * observed.calculus().cnd_diameter();
  const int cap = opts.budget ? std::min(*opts.budget, exhaustive) : exhaustive;

  for (int i = 0; i <= cap; ++i) {
    std::vector<ConstraintNetwork> accepted;
    for (ConstraintNetwork& candidate : relax(observed, i)) {
      ClosureResult r = algebraic_closure(std::move(candidate));
      if (!r.consistent) continue;
      if (!compliant(r.network, ics)) continue;
      accepted.push_back(std::move(r.network));
    }
    if (accepted.empty()) continue;

    MergeResult result;
    result.distance = i;
    result.resolved = observed;
    for (auto [a, b] : result.resolved.active_pairs()) {
      RelationSet unioned;
      for (const ConstraintNetwork& s : accepted) unioned |= s.label(a, b);
      result.resolved.set_label(a, b, unioned);
      if (unioned != observed.label(a, b)) {
        result.repaired_pairs.push_back({result.resolved.variable(a).name,
                                         result.resolved.variable(b).name, observed.label(a, b),
                                         unioned});
      }
    }
    return result;
  }
  if (cap < exhaustive) throw MergeBudgetExhausted(cap);
  throw MergeUnsatisfiable();
}

ConstraintNetwork collapse_coreferent(const ConstraintNetwork& net) {
  ConstraintNetwork out = net;
  for (int i = 0; i < out.size(); ++i) {
    for (int j = out.size() - 1; j > i; --j) {
      if (!out.variable(i).coreferent_with(out.variable(j))) continue;
      if (out.variable(i).name != out.variable(i).object_id) continue;  // keep the plain name
      for (int k = 0; k < out.size(); ++k) {
        if (k == i || k == j) continue;
        out.refine_label(i, k, out.label(j, k));
      }
      out.remove_variable(j);
    }
  }
  return out;
}

ConstraintNetwork qualify_and_merge(const Snapshot& snapshot,
                                    const std::vector<IntegrityConstraint>& ics,
                                    const QualifyOptions& qopts, const MergeOptions& mopts,
                                    MergeResult* report) {
  ConstraintNetwork q = qualify_snapshot(snapshot, qopts);
  if (consistent_with(q, ics)) {
    if (report) {
      report->resolved = q;
      report->distance = 0;
      report->repaired_pairs.clear();
    }
    return collapse_coreferent(q);
  }
  MergeResult merged = resolve(q, ics, mopts);
  ConstraintNetwork collapsed = collapse_coreferent(merged.resolved);
  if (report) *report = std::move(merged);
  return collapsed;
}

}  // namespace geonarrate

#include "geonarrate/qualify.hpp"

#include <algorithm>
#include <cmath>

namespace geonarrate {

namespace {

// Variables per feature, named id, id', id'', ... in source order.
std::vector<std::pair<Variable, const TimedFeature*>> snapshot_variables(const Snapshot& snapshot) {
  std::vector<std::pair<Variable, const TimedFeature*>> out;
  std::map<std::string, int> seen;
  for (const TimedFeature& f : snapshot.features) {
    int n = seen[f.object_id]++;
    Variable v;
    v.name = f.object_id + std::string(static_cast<size_t>(n), '\'');
    v.object_id = f.object_id;
    v.type = f.object_type;
    v.exists = true;
    v.source = f.source_id;
    out.emplace_back(std::move(v), &f);
  }
  return out;
}

}  // namespace

double effective_eps(const Snapshot& snapshot, const QualifyOptions& opts) {
  if (opts.eps) return *opts.eps;
  BBox box;
  bool first = true;
  for (const TimedFeature& f : snapshot.features) {
    BBox b = f.geometry.bbox();
    if (first) {
      box = b;
      first = false;
    } else {
      box.min_x = std::min(box.min_x, b.min_x);
      box.min_y = std::min(box.min_y, b.min_y);
      box.max_x = std::max(box.max_x, b.max_x);
      box.max_y = std::max(box.max_y, b.max_y);
    }
  }
  return first ? 1e-6 : 1e-6 * box.diagonal();
}

ConstraintNetwork qualify_snapshot(const Snapshot& snapshot, const QualifyOptions& opts) {
  const double eps = effective_eps(snapshot, opts);
  ConstraintNetwork net(Calculus::rcc8());
  auto vars = snapshot_variables(snapshot);
  std::vector<const TimedFeature*> features;
  for (auto& [v, f] : vars) {
    net.add_variable(v);
    features.push_back(f);
  }
  for (int i = 0; i < net.size(); ++i) {
    for (int j = i + 1; j < net.size(); ++j) {
      double rho = 0;
      auto it = opts.source_error_radius.find(features[i]->source_id);
      if (it != opts.source_error_radius.end()) rho += it->second;
      it = opts.source_error_radius.find(features[j]->source_id);
      if (it != opts.source_error_radius.end()) rho += it->second;
      try {
        if (rho > 0) {
          net.set_label(i, j,
                        qualify_pair_uncertain(features[i]->geometry, features[j]->geometry, eps,
                                               rho));
        } else {
          net.set_label(i, j, rel(qualify_pair(features[i]->geometry, features[j]->geometry, eps)));
        }
      } catch (const GeometryError& e) {
        throw GeometryError("qualifying pair (" + net.variable(i).name + ", " +
                            net.variable(j).name + "): " + e.what());
      }
    }
  }
  return net;
}

ConstraintNetwork size_snapshot(const Snapshot& snapshot, double ratio_tol) {
  ConstraintNetwork net(Calculus::size_order());
  auto vars = snapshot_variables(snapshot);
  std::vector<const TimedFeature*> features;
  for (auto& [v, f] : vars) {
    net.add_variable(v);
    features.push_back(f);
  }
  for (int i = 0; i < net.size(); ++i) {
    for (int j = i + 1; j < net.size(); ++j) {
      net.set_label(i, j,
                    rel(size_relation(features[i]->geometry, features[j]->geometry, ratio_tol)));
    }
  }
  return net;
}

}  // namespace geonarrate

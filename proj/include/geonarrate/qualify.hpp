#pragma once

#include <map>
#include <optional>
#include <string>

#include "geonarrate/network.hpp"
#include "geonarrate/timeline.hpp"

namespace geonarrate {

struct QualifyOptions {
  // Boundary-contact tolerance; empty means 1e-6 times the diagonal of the
  // snapshot's combined bounding box.
  std::optional<double> eps;
  // Declared positional error radius per source id. Pairs whose
  // classification could flip within the radius get disjunctive labels.
  std::map<std::string, double> source_error_radius;
};

double effective_eps(const Snapshot& snapshot, const QualifyOptions& opts);

// Qualitative abstraction of one snapshot: a constraint network over all
// features present. Several geometries for one object id (from different
// sources) become distinct variables named id, id', id'', ... that share the
// object_id annotation; the merge step arbitrates between them later.
ConstraintNetwork qualify_snapshot(const Snapshot& snapshot, const QualifyOptions& opts = {});

// Parallel size network over the same variables (total-order point algebra).
ConstraintNetwork size_snapshot(const Snapshot& snapshot, double ratio_tol = 0.05);

}  // namespace geonarrate

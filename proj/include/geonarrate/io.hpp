#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "geonarrate/abduce.hpp"
#include "geonarrate/constraints.hpp"
#include "geonarrate/events.hpp"
#include "geonarrate/network.hpp"
#include "geonarrate/rules.hpp"
#include "geonarrate/timeline.hpp"

namespace geonarrate {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- canonical network text --------------------------------------------------
//
//   var ; <name> ; type=<T> ; exists=<true|false> [; object=<id>] [; source=<s>]
//   <nameA> ; <nameB> ; {rel,...}
//
// Variable lines in insertion order; one line per unordered pair of existing
// variables, sorted lexicographically by (min, max) name.
std::string write_network(const ConstraintNetwork& net);
ConstraintNetwork read_network(std::istream& in, const Calculus& calc = Calculus::rcc8());
ConstraintNetwork read_network_file(const std::string& path,
                                    const Calculus& calc = Calculus::rcc8());

// Observation files: blocks separated by `@obs <k>` headers, each block a
// canonical network. Variables absent from a block do not exist there.
std::vector<ConstraintNetwork> read_observations(std::istream& in,
                                                 const Calculus& calc = Calculus::rcc8());
std::string write_observations(const std::vector<ConstraintNetwork>& observations);

// --- features ---------------------------------------------------------------
//
// Newline-delimited GeoJSON Features with properties id, type, timestamp,
// source and Polygon geometry.
std::vector<TimedFeature> read_features(std::istream& in);
std::vector<TimedFeature> read_features_file(const std::string& path);

// --- configuration ----------------------------------------------------------

std::vector<IntegrityConstraint> read_constraints_file(const std::string& path);
std::vector<ProcessRule> read_rules_file(const std::string& path);

// --- narrative --------------------------------------------------------------
//
//   @state <k>       followed by a canonical network block
//   @events          followed by one line per occurrence:
//   <t> ; <kind> ; <participants , -joined> ; <target|-> ; <flags|-> ; <evidence>
std::string write_narrative(const Narrative& narrative);
Narrative read_narrative(std::istream& in);
Narrative read_narrative_file(const std::string& path);

std::string write_timeline(const Timeline& timeline);
std::string write_explanations(const ExplainResult& result);
std::string write_instances(const std::vector<ProcessInstance>& instances,
                            const Narrative& narrative);

// FNV-1a 64 content digest, hex-encoded; used by run manifests.
std::string digest_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace geonarrate

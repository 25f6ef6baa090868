#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geonarrate/abduce.hpp"
#include "geonarrate/events.hpp"
#include "geonarrate/io.hpp"
#include "geonarrate/merge.hpp"
#include "geonarrate/rules.hpp"

namespace geonarrate {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::string input_path;                // newline-delimited GeoJSON features
  std::optional<double> eps;             // boundary tolerance; empty = auto
  std::string partition = "auto";        // auto | gap:<dur> | window:<dur>
  std::string constraints_path;          // optional
  std::string rules_path;                // optional
  std::set<EventKind> abducibles = {EventKind::appearance, EventKind::disappearance,
                                    EventKind::split, EventKind::merge, EventKind::transition};
  std::optional<int> merge_budget;
  std::size_t explain_budget = 1'000'000;
  DetectionConfig detection;
  std::map<std::string, double> source_error_radius;
  std::string out_dir;

  static PipelineConfig from_file(const std::string& path);  // throws ConfigError
};

struct RunManifest {
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64
  std::string config_snapshot;                       // canonical json
  std::vector<std::pair<std::string, double>> stage_ms;
  std::vector<std::string> artifacts;

  std::string to_json() const;
};

struct PipelineRun {
  Timeline timeline;
  std::vector<ConstraintNetwork> networks;  // merged, one per snapshot
  std::vector<MergeResult> merge_reports;
  Narrative narrative;
  ExplainResult interpolations;  // abduced completions of flagged discontinuities
  std::vector<ProcessInstance> instances;
  RunManifest manifest;
};

// Runs partition -> qualify+merge per snapshot -> event detection ->
// abduction over flagged discontinuities -> rule matching, writing one
// plain-text artifact per stage into config.out_dir. Rerunning with
// identical inputs and config produces byte-identical stage artifacts.
PipelineRun run_pipeline(const PipelineConfig& config);

}  // namespace geonarrate

#include "geonarrate/pipeline.hpp"

#include <chrono>
#include <filesystem>

#include <json.hpp>

namespace geonarrate {

namespace {

using nlohmann::json;

double since_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  PipelineConfig cfg;
  try {
    cfg.input_path = j.at("input").get<std::string>();
    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("partition")) cfg.partition = j.at("partition").get<std::string>();
    if (j.contains("constraints")) cfg.constraints_path = j.at("constraints").get<std::string>();
    if (j.contains("rules")) cfg.rules_path = j.at("rules").get<std::string>();
    if (j.contains("abducibles")) {
      cfg.abducibles.clear();
      for (const json& a : j.at("abducibles")) {
        auto k = event_kind_by_name(a.get<std::string>());
        if (!k) throw ConfigError("config: unknown abducible " + a.get<std::string>());
        cfg.abducibles.insert(*k);
      }
    }
    if (j.contains("merge_budget")) cfg.merge_budget = j.at("merge_budget").get<int>();
    if (j.contains("explain_budget")) cfg.explain_budget = j.at("explain_budget").get<std::size_t>();
    if (j.contains("detection")) {
      const json& d = j.at("detection");
      if (d.contains("coverage_tol")) cfg.detection.coverage_tol = d.at("coverage_tol");
      if (d.contains("centroid_frac")) cfg.detection.centroid_frac = d.at("centroid_frac");
      if (d.contains("area_threshold")) cfg.detection.area_ratio_threshold = d.at("area_threshold");
    }
    if (j.contains("source_error_radius")) {
      for (auto& [source, radius] : j.at("source_error_radius").items()) {
        cfg.source_error_radius[source] = radius.get<double>();
      }
    }
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  // Fail early on anything referenced but missing.
  if (!std::filesystem::exists(cfg.input_path)) {
    throw ConfigError("config: input does not exist: " + cfg.input_path);
  }
  if (!cfg.constraints_path.empty() && !std::filesystem::exists(cfg.constraints_path)) {
    throw ConfigError("config: constraints file does not exist: " + cfg.constraints_path);
  }
  if (!cfg.rules_path.empty() && !std::filesystem::exists(cfg.rules_path)) {
    throw ConfigError("config: rules file does not exist: " + cfg.rules_path);
  }
  PartitionPolicy::parse(cfg.partition);  // validate now, use later
  return cfg;
}

std::string RunManifest::to_json() const {
  json j;
  for (const auto& [path, digest] : input_digests) j["inputs"][path] = digest;
  j["config"] = json::parse(config_snapshot);
  for (const auto& [stage, ms] : stage_ms) j["stage_ms"][stage] = ms;
  j["artifacts"] = artifacts;
  return j.dump(2) + "\n";
}

namespace {

std::string config_snapshot_json(const PipelineConfig& cfg) {
  json j;
  j["input"] = cfg.input_path;
  if (cfg.eps) j["eps"] = *cfg.eps;
  j["partition"] = cfg.partition;
  if (!cfg.constraints_path.empty()) j["constraints"] = cfg.constraints_path;
  if (!cfg.rules_path.empty()) j["rules"] = cfg.rules_path;
  std::vector<std::string> abducibles;
  for (EventKind k : cfg.abducibles) abducibles.push_back(event_kind_name(k));
  j["abducibles"] = abducibles;
  if (cfg.merge_budget) j["merge_budget"] = *cfg.merge_budget;
  j["explain_budget"] = cfg.explain_budget;
  j["detection"] = {{"coverage_tol", cfg.detection.coverage_tol},
                    {"centroid_frac", cfg.detection.centroid_frac},
                    {"area_threshold", cfg.detection.area_ratio_threshold}};
  return j.dump();
}

// Completion of one flagged discontinuous transition: the chain of
// conceptual-neighborhood steps between the two observed relations,
// found by the abducer on the pair restricted to transitions.
ExplainResult interpolate_discontinuities(const Narrative& narrative,
                                          const std::size_t budget) {
  ExplainResult all;
  all.satisfiable = true;
  for (const EventOccurrence& ev : narrative.events) {
    if (ev.kind != EventKind::transition || !ev.discontinuous) continue;
    const StateSlice* before = narrative.state_at(ev.time_index - 1);
    const StateSlice* after = narrative.state_at(ev.time_index);
    if (!before || !after) continue;
    auto restrict = [&](const ConstraintNetwork& net) {
      ConstraintNetwork out(net.calculus());
      for (const std::string& name : ev.participants) {
        int i = net.index_of(name);
        out.add_variable(net.variable(i));
      }
      out.set_label(0, 1, net.label(net.index_of(ev.participants[0]),
                                    net.index_of(ev.participants[1])));
      return out;
    };
    AbduceOptions opts;
    opts.abducibles = {EventKind::transition};
    opts.budget = budget;
    ExplainResult one = explain({restrict(before->network), restrict(after->network)}, opts);
    if (one.budget_exhausted) all.budget_exhausted = true;
    for (Explanation& e : one.explanations) {
      for (PlacedEvent& pe : e.moves) pe.segment = before->time_index;
      for (PlacedEvent& pe : e.records) {
        pe.segment = before->time_index;
        pe.event.time_index = before->time_index;
        pe.event.evidence = "interpolates " + ev.participants[0] + "-" + ev.participants[1] +
                            " between t" + std::to_string(before->time_index) + " and t" +
                            std::to_string(after->time_index);
      }
      all.explanations.push_back(std::move(e));
    }
  }
  return all;
}

}  // namespace

PipelineRun run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  if (config.out_dir.empty()) throw ConfigError("pipeline needs an output directory");
  fs::create_directories(config.out_dir);
  auto artifact = [&](const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
  };

  PipelineRun run;
  run.manifest.config_snapshot = config_snapshot_json(config);
  run.manifest.input_digests[config.input_path] = digest_file(config.input_path);
  if (!config.constraints_path.empty()) {
    run.manifest.input_digests[config.constraints_path] = digest_file(config.constraints_path);
  }
  if (!config.rules_path.empty()) {
    run.manifest.input_digests[config.rules_path] = digest_file(config.rules_path);
  }

  // Stage 1: ingest and partition.
  auto t0 = std::chrono::steady_clock::now();
  std::vector<TimedFeature> features = read_features_file(config.input_path);
  if (features.empty()) throw IoError("no features in " + config.input_path);
  run.timeline = partition(std::move(features), PartitionPolicy::parse(config.partition));
  write_text_file(artifact("timeline.txt"), write_timeline(run.timeline));
  run.manifest.artifacts.push_back(artifact("timeline.txt"));
  run.manifest.stage_ms.emplace_back("partition", since_ms(t0));

  // Stage 2: qualitative abstraction + conflict resolution per snapshot.
  t0 = std::chrono::steady_clock::now();
  std::vector<IntegrityConstraint> ics;
  if (!config.constraints_path.empty()) ics = read_constraints_file(config.constraints_path);
  QualifyOptions qopts;
  qopts.eps = config.eps;
  qopts.source_error_radius = config.source_error_radius;
  MergeOptions mopts;
  mopts.budget = config.merge_budget;
  std::string merge_report;
  for (const Snapshot& snap : run.timeline.snapshots) {
    MergeResult report;
    ConstraintNetwork merged = qualify_and_merge(snap, ics, qopts, mopts, &report);
    merge_report += "t" + std::to_string(snap.time_index) +
                    " ; distance=" + std::to_string(report.distance) + "\n";
    for (const auto& repair : report.repaired_pairs) {
      merge_report += "  repair ; " + repair.a + " ; " + repair.b + " ; " +
                      merged.calculus().set_to_string(repair.before) + " -> " +
                      merged.calculus().set_to_string(repair.after) + "\n";
    }
    std::string name = "network_t" + std::to_string(snap.time_index) + ".txt";
    write_text_file(artifact(name), write_network(merged));
    run.manifest.artifacts.push_back(artifact(name));
    run.networks.push_back(std::move(merged));
    run.merge_reports.push_back(std::move(report));
  }
  write_text_file(artifact("merge_report.txt"), merge_report);
  run.manifest.artifacts.push_back(artifact("merge_report.txt"));
  run.manifest.stage_ms.emplace_back("qualify_merge", since_ms(t0));

  // Stage 3: event detection.
  t0 = std::chrono::steady_clock::now();
  run.narrative = detect_narrative(run.timeline, run.networks, config.detection);
  write_text_file(artifact("narrative.txt"), write_narrative(run.narrative));
  run.manifest.artifacts.push_back(artifact("narrative.txt"));
  run.manifest.stage_ms.emplace_back("detect", since_ms(t0));

  // Stage 4: abduce completions for flagged discontinuities.
  t0 = std::chrono::steady_clock::now();
  run.interpolations = interpolate_discontinuities(run.narrative, config.explain_budget);
  write_text_file(artifact("explanations.txt"), write_explanations(run.interpolations));
  run.manifest.artifacts.push_back(artifact("explanations.txt"));
  run.manifest.stage_ms.emplace_back("abduce", since_ms(t0));

  // Stage 5: process recognition.
  t0 = std::chrono::steady_clock::now();
  if (!config.rules_path.empty()) {
    run.instances = match_rules(run.narrative, read_rules_file(config.rules_path));
  }
  write_text_file(artifact("processes.txt"), write_instances(run.instances, run.narrative));
  run.manifest.artifacts.push_back(artifact("processes.txt"));
  run.manifest.stage_ms.emplace_back("rules", since_ms(t0));

  write_text_file(artifact("manifest.json"), run.manifest.to_json());
  return run;
}

}  // namespace geonarrate

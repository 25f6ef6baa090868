#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "geonarrate/io.hpp"
#include "geonarrate/pipeline.hpp"

namespace gn = geonarrate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFinding = 1;    // inconsistency / no explanation
constexpr int kExitUsage = 2;      // usage or configuration error
constexpr int kExitBudget = 3;     // search budget exhausted

std::set<gn::EventKind> parse_abducibles(const std::string& csv) {
  std::set<gn::EventKind> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto k = gn::event_kind_by_name(item);
    if (!k) throw gn::ConfigError("unknown abducible: " + item);
    out.insert(*k);
  }
  if (out.empty()) throw gn::ConfigError("empty abducible set");
  return out;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    gn::write_text_file(out_path, content);
  }
}

gn::Timeline load_timeline(const std::string& input, const std::string& partition) {
  auto features = gn::read_features_file(input);
  if (features.empty()) throw gn::IoError("no features in " + input);
  return gn::partition(std::move(features), gn::PartitionPolicy::parse(partition));
}

int cmd_qualify(const std::string& input, const std::string& partition, double eps,
                const std::string& out) {
  gn::Timeline timeline = load_timeline(input, partition);
  gn::QualifyOptions opts;
  if (eps > 0) opts.eps = eps;
  std::string text;
  for (const gn::Snapshot& snap : timeline.snapshots) {
    text += "@obs " + std::to_string(snap.time_index) + "\n";
    text += gn::write_network(gn::qualify_snapshot(snap, opts));
  }
  emit(out, text);
  return kExitOk;
}

int cmd_check(const std::string& network_path, const std::string& constraints_path) {
  gn::ConstraintNetwork net = gn::read_network_file(network_path);
  std::vector<gn::IntegrityConstraint> ics;
  if (!constraints_path.empty()) ics = gn::read_constraints_file(constraints_path);
  gn::ConstraintNetwork restricted = gn::apply_constraints(net, ics);
  gn::ClosureResult closed = gn::algebraic_closure(restricted);
  if (closed.consistent && gn::is_consistent(closed.network)) {
    std::cout << "consistent\n";
    return kExitOk;
  }
  std::cout << "inconsistent\n";
  if (closed.fail_i >= 0) {
    const auto& net_out = closed.network;
    std::cout << "violation: " << net_out.variable(closed.fail_i).name << " ; "
              << net_out.variable(closed.fail_j).name << " : label emptied";
    if (closed.fail_via >= 0) {
      std::cout << " via " << net_out.variable(closed.fail_via).name << " (path "
                << net_out.variable(closed.fail_i).name << " - "
                << net_out.variable(closed.fail_via).name << " - "
                << net_out.variable(closed.fail_j).name << ")";
    }
    std::cout << "\n    observed " << net.calculus().set_to_string(
        net.label(closed.fail_i, closed.fail_j));
    gn::RelationSet allowed = gn::allowed_label(net, closed.fail_i, closed.fail_j, ics);
    if (allowed != net.calculus().universal()) {
      std::cout << ", constraints allow " << net.calculus().set_to_string(allowed);
    }
    std::cout << "\n";
  }
  return kExitFinding;
}

int cmd_merge(const std::string& network_path, const std::string& constraints_path, int budget,
              const std::string& out) {
  gn::ConstraintNetwork net = gn::read_network_file(network_path);
  std::vector<gn::IntegrityConstraint> ics;
  if (!constraints_path.empty()) ics = gn::read_constraints_file(constraints_path);
  gn::MergeOptions opts;
  if (budget >= 0) opts.budget = budget;
  gn::MergeResult result = gn::resolve(net, ics, opts);
  std::string text;
  for (const auto& repair : result.repaired_pairs) {
    text += "repair ; " + repair.a + " ; " + repair.b + " ; " +
            net.calculus().set_to_string(repair.before) + " -> " +
            net.calculus().set_to_string(repair.after) + "\n";
  }
  text += "distance ; " + std::to_string(result.distance) + "\n";
  text += gn::write_network(result.resolved);
  emit(out, text);
  return kExitOk;
}

int cmd_narrate(const std::string& input, const std::string& partition, double eps,
                const std::string& constraints_path, const std::string& out) {
  gn::Timeline timeline = load_timeline(input, partition);
  std::vector<gn::IntegrityConstraint> ics;
  if (!constraints_path.empty()) ics = gn::read_constraints_file(constraints_path);
  gn::QualifyOptions qopts;
  if (eps > 0) qopts.eps = eps;
  std::vector<gn::ConstraintNetwork> networks;
  for (const gn::Snapshot& snap : timeline.snapshots) {
    networks.push_back(gn::qualify_and_merge(snap, ics, qopts));
  }
  gn::Narrative narrative = gn::detect_narrative(timeline, networks, gn::DetectionConfig{});
  std::string text = gn::write_narrative(narrative);
  text += "# timeline\n";
  for (const gn::EventOccurrence& ev : narrative.events) {
    text += "#   t" + std::to_string(ev.time_index) + "  " + gn::event_kind_name(ev.kind) + "(";
    for (size_t p = 0; p < ev.participants.size(); ++p) {
      if (p) text += ", ";
      text += ev.participants[p];
    }
    text += ")";
    if (ev.target) {
      text += " -> " + std::string(gn::Calculus::rcc8().atom_name(static_cast<int>(*ev.target)));
    }
    text += "\n";
  }
  emit(out, text);
  return kExitOk;
}

int cmd_explain(const std::string& observations_path, const std::string& abducibles_csv,
                std::size_t budget, const std::string& out) {
  std::ifstream in(observations_path);
  if (!in) throw gn::IoError("cannot open " + observations_path);
  std::vector<gn::ConstraintNetwork> observations = gn::read_observations(in);
  gn::AbduceOptions opts;
  opts.abducibles = parse_abducibles(abducibles_csv);
  opts.budget = budget;
  gn::ExplainResult result = gn::explain(observations, opts);
  emit(out, gn::write_explanations(result));
  if (result.budget_exhausted) return kExitBudget;
  return result.satisfiable ? kExitOk : kExitFinding;
}

int cmd_query(const std::string& rules_path, const std::string& narrative_path,
              const std::string& out) {
  gn::Narrative narrative = gn::read_narrative_file(narrative_path);
  std::vector<gn::ProcessRule> rules = gn::read_rules_file(rules_path);
  std::vector<gn::ProcessInstance> instances = gn::match_rules(narrative, rules);
  std::string text = gn::write_instances(instances, narrative);
  text += "# " + std::to_string(instances.size()) + " process instance(s)\n";
  std::map<std::string, int> counts;
  for (const auto& inst : instances) counts[inst.rule]++;
  for (const auto& [rule, count] : counts) {
    text += "#   " + rule + ": " + std::to_string(count) + "\n";
  }
  emit(out, text);
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  gn::PipelineConfig config = gn::PipelineConfig::from_file(config_path);
  if (!out_dir.empty()) config.out_dir = out_dir;
  gn::PipelineRun run = gn::run_pipeline(config);
  std::cout << "snapshots: " << run.timeline.snapshots.size() << "\n";
  std::cout << "events: " << run.narrative.events.size() << "\n";
  std::cout << "processes: " << run.instances.size() << "\n";
  std::cout << "artifacts in " << config.out_dir << "\n";
  return run.interpolations.budget_exhausted ? kExitBudget : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qualitative spatio-temporal narrative engine"};
  app.require_subcommand(1);

  std::string input, partition = "auto", out, network_path, constraints_path, rules_path,
              observations_path, narrative_path, config_path, out_dir;
  std::string abducibles = "appearance,disappearance,split,merge,transition";
  double eps = -1;
  int merge_budget = -1;
  std::size_t explain_budget = 1'000'000;

  auto* qualify = app.add_subcommand("qualify", "derive qualitative snapshots from features");
  qualify->add_option("--input", input)->required();
  qualify->add_option("--partition", partition, "auto | gap:<dur> | window:<dur>");
  qualify->add_option("--eps", eps, "boundary tolerance (default: auto)");
  qualify->add_option("--out", out, "output file (default: stdout)");

  auto* check = app.add_subcommand("check", "consistency verdict for a network file");
  check->add_option("--network", network_path)->required();
  check->add_option("--constraints", constraints_path);

  auto* merge = app.add_subcommand("merge", "resolve conflicts against integrity constraints");
  merge->add_option("--network", network_path)->required();
  merge->add_option("--constraints", constraints_path);
  merge->add_option("--budget", merge_budget, "repair distance cap");
  merge->add_option("--out", out);

  auto* narrate = app.add_subcommand("narrate", "detect events over a feature timeline");
  narrate->add_option("--input", input)->required();
  narrate->add_option("--partition", partition);
  narrate->add_option("--eps", eps);
  narrate->add_option("--constraints", constraints_path);
  narrate->add_option("--out", out);

  auto* explain = app.add_subcommand("explain", "abduce event sequences between observations");
  explain->add_option("--observations", observations_path)->required();
  explain->add_option("--abducibles", abducibles, "comma-separated event kinds");
  explain->add_option("--budget", explain_budget, "max expanded search nodes");
  explain->add_option("--out", out);

  auto* query = app.add_subcommand("query", "match process rules against a narrative");
  query->add_option("--rules", rules_path)->required();
  query->add_option("--narrative", narrative_path)->required();
  query->add_option("--out", out);

  auto* run = app.add_subcommand("run", "full pipeline from a config file");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (qualify->parsed()) return cmd_qualify(input, partition, eps, out);
    if (check->parsed()) return cmd_check(network_path, constraints_path);
    if (merge->parsed()) return cmd_merge(network_path, constraints_path, merge_budget, out);
    if (narrate->parsed()) return cmd_narrate(input, partition, eps, constraints_path, out);
    if (explain->parsed()) return cmd_explain(observations_path, abducibles, explain_budget, out);
    if (query->parsed()) return cmd_query(rules_path, narrative_path, out);
    if (run->parsed()) return cmd_run(config_path, out_dir);
  } catch (const gn::MergeBudgetExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const gn::MergeUnsatisfiable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFinding;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

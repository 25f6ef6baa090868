#include "geonarrate/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace geonarrate {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ';')) parts.push_back(trim(cur));
  return parts;
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

}  // namespace

std::string write_network(const ConstraintNetwork& net) {
  std::string out;
  for (int i = 0; i < net.size(); ++i) {
    const Variable& v = net.variable(i);
    out += "var ; " + v.name + " ; type=" + v.type + " ; exists=" + (v.exists ? "true" : "false");
    if (v.object_id != v.name) out += " ; object=" + v.object_id;
    if (!v.source.empty()) out += " ; source=" + v.source;
    out += "\n";
  }
  std::vector<std::pair<std::string, std::string>> lines;
  for (auto [i, j] : net.active_pairs()) {
    std::string a = net.variable(i).name;
    std::string b = net.variable(j).name;
    RelationSet label = net.label(i, j);
    if (b < a) {
      std::swap(a, b);
      label = net.calculus().converse(label);
    }
    lines.emplace_back(a + " ; " + b, net.calculus().set_to_string(label));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [pair, label] : lines) out += pair + " ; " + label + "\n";
  return out;
}

namespace {

void apply_network_line(ConstraintNetwork& net, const std::string& line) {
  auto fields = split_fields(line);
  if (fields.empty()) return;
  if (fields[0] == "var") {
    if (fields.size() < 2) throw IoError("bad var line: " + line);
    Variable v;
    v.name = fields[1];
    v.object_id = v.name;
    for (size_t f = 2; f < fields.size(); ++f) {
      const std::string& field = fields[f];
      auto eq = field.find('=');
      if (eq == std::string::npos) throw IoError("bad var attribute: " + field);
      std::string key = field.substr(0, eq);
      std::string value = field.substr(eq + 1);
      if (key == "type") {
        v.type = value;
      } else if (key == "exists") {
        v.exists = value == "true";
      } else if (key == "object") {
        v.object_id = value;
      } else if (key == "source") {
        v.source = value;
      } else {
        throw IoError("unknown var attribute: " + key);
      }
    }
    net.add_variable(std::move(v));
    return;
  }
  if (fields.size() != 3) throw IoError("bad constraint line: " + line);
  int i = net.index_of(fields[0]);
  int j = net.index_of(fields[1]);
  if (i < 0 || j < 0) throw IoError("constraint on undeclared variable: " + line);
  auto set = net.calculus().set_from_string(fields[2]);
  if (!set) throw IoError("bad relation set: " + fields[2]);
  net.set_label(i, j, *set);
}

}  // namespace

ConstraintNetwork read_network(std::istream& in, const Calculus& calc) {
  ConstraintNetwork net(calc);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    apply_network_line(net, t);
  }
  return net;
}

ConstraintNetwork read_network_file(const std::string& path, const Calculus& calc) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_network(in, calc);
}

std::vector<ConstraintNetwork> read_observations(std::istream& in, const Calculus& calc) {
  std::vector<ConstraintNetwork> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("@obs", 0) == 0) {
      out.emplace_back(calc);
      continue;
    }
    if (out.empty()) throw IoError("observation data before the first @obs header");
    apply_network_line(out.back(), t);
  }
  return out;
}

std::string write_observations(const std::vector<ConstraintNetwork>& observations) {
  std::string out;
  for (size_t k = 0; k < observations.size(); ++k) {
    out += "@obs " + std::to_string(k + 1) + "\n";
    out += write_network(observations[k]);
  }
  return out;
}

std::vector<TimedFeature> read_features(std::istream& in) {
  std::vector<TimedFeature> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    json j;
    try {
      j = json::parse(t);
    } catch (const json::exception& e) {
      throw IoError("feature line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      const json& props = j.at("properties");
      TimedFeature f;
      f.object_id = props.at("id").get<std::string>();
      f.object_type = props.at("type").get<std::string>();
      f.source_id = props.at("source").get<std::string>();
      f.timestamp_raw = props.at("timestamp").get<std::string>();
      f.timestamp_us = parse_instant_utc(f.timestamp_raw);
      const json& geom = j.at("geometry");
      if (geom.at("type").get<std::string>() != "Polygon") {
        throw IoError("geometry must be Polygon");
      }
      std::vector<std::vector<Point>> rings;
      for (const json& ring : geom.at("coordinates")) {
        std::vector<Point> r;
        for (const json& coord : ring) {
          r.push_back({coord.at(0).get<double>(), coord.at(1).get<double>()});
        }
        rings.push_back(std::move(r));
      }
      f.geometry = Region::from_rings(std::move(rings));
      out.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw IoError("feature line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw IoError("feature line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TimedFeature> read_features_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_features(in);
}

std::vector<IntegrityConstraint> read_constraints_file(const std::string& path) {
  json j = parse_json_file(path);
  std::vector<IntegrityConstraint> out;
  const Calculus& calc = Calculus::rcc8();
  for (const json& entry : j.at("constraints")) {
    IntegrityConstraint ic;
    ic.name = entry.at("name").get<std::string>();
    ic.left_type = entry.at("left_type").get<std::string>();
    ic.right_type = entry.at("right_type").get<std::string>();
    for (const json& r : entry.at("allowed")) {
      auto a = calc.atom_by_name(r.get<std::string>());
      if (!a) throw IoError(path + ": unknown relation " + r.get<std::string>());
      ic.allowed.insert(*a);
    }
    if (ic.allowed.empty()) throw IoError(path + ": constraint '" + ic.name + "' allows nothing");
    out.push_back(std::move(ic));
  }
  return out;
}

std::vector<ProcessRule> read_rules_file(const std::string& path) {
  json j = parse_json_file(path);
  std::vector<ProcessRule> out;
  const Calculus& calc = Calculus::rcc8();
  for (const json& entry : j.at("rules")) {
    ProcessRule rule;
    rule.name = entry.at("name").get<std::string>();
    for (const json& b : entry.at("bindings")) {
      rule.bindings.emplace_back(b.at("var").get<std::string>(), b.at("type").get<std::string>());
    }
    for (const json& a : entry.at("pattern")) {
      RuleAtom atom;
      const json& kinds = a.at("kind");
      auto add_kind = [&](const std::string& name) {
        auto k = event_kind_by_name(name);
        if (!k) throw IoError(path + ": unknown event kind " + name);
        atom.kinds.insert(*k);
      };
      if (kinds.is_array()) {
        for (const json& k : kinds) add_kind(k.get<std::string>());
      } else {
        add_kind(kinds.get<std::string>());
      }
      for (const json& v : a.at("vars")) atom.vars.push_back(v.get<std::string>());
      if (a.contains("target_relations")) {
        RelationSet target;
        for (const json& r : a.at("target_relations")) {
          auto at = calc.atom_by_name(r.get<std::string>());
          if (!at) throw IoError(path + ": unknown relation " + r.get<std::string>());
          target.insert(*at);
        }
        atom.target = target;
      }
      if (a.contains("temporal")) {
        for (const json& t : a.at("temporal")) {
          RuleAtom::Temporal temporal;
          std::string op = t.at("op").get<std::string>();
          if (op == "before") {
            temporal.op = RuleAtom::TemporalOp::before;
          } else if (op == "not_same_step") {
            temporal.op = RuleAtom::TemporalOp::not_same_step;
          } else {
            throw IoError(path + ": unknown temporal op " + op);
          }
          temporal.other_atom = t.at("atom").get<int>();
          atom.temporal.push_back(temporal);
        }
      }
      rule.pattern.push_back(std::move(atom));
    }
    if (rule.pattern.empty()) throw IoError(path + ": rule '" + rule.name + "' has no pattern");
    out.push_back(std::move(rule));
  }
  return out;
}

namespace {

std::string event_line(const EventOccurrence& ev) {
  std::string participants;
  for (const std::string& p : ev.participants) {
    if (!participants.empty()) participants += ",";
    participants += p;
  }
  std::string target = "-";
  if (ev.target) target = Calculus::rcc8().atom_name(static_cast<int>(*ev.target));
  std::string flags;
  if (ev.discontinuous) flags += "discontinuous";
  if (ev.abduced) flags += flags.empty() ? "abduced" : ",abduced";
  if (flags.empty()) flags = "-";
  return std::to_string(ev.time_index) + " ; " + event_kind_name(ev.kind) + " ; " + participants +
         " ; " + target + " ; " + flags + " ; " + ev.evidence;
}

EventOccurrence parse_event_line(const std::string& line) {
  auto fields = split_fields(line);
  if (fields.size() < 5) throw IoError("bad event line: " + line);
  EventOccurrence ev;
  ev.time_index = std::stoi(fields[0]);
  auto kind = event_kind_by_name(fields[1]);
  if (!kind) throw IoError("unknown event kind: " + fields[1]);
  ev.kind = *kind;
  std::stringstream ps(fields[2]);
  std::string p;
  while (std::getline(ps, p, ',')) ev.participants.push_back(trim(p));
  if (fields[3] != "-") {
    auto a = Calculus::rcc8().atom_by_name(fields[3]);
    if (!a) throw IoError("unknown relation: " + fields[3]);
    ev.target = static_cast<Rcc8>(*a);
  }
  if (fields[4] != "-") {
    ev.discontinuous = fields[4].find("discontinuous") != std::string::npos;
    ev.abduced = fields[4].find("abduced") != std::string::npos;
  }
  if (fields.size() > 5) ev.evidence = fields[5];
  return ev;
}

}  // namespace

std::string write_narrative(const Narrative& narrative) {
  std::string out;
  for (const StateSlice& s : narrative.states) {
    out += "@state " + std::to_string(s.time_index) + "\n";
    out += write_network(s.network);
  }
  out += "@events\n";
  for (const EventOccurrence& ev : narrative.events) out += event_line(ev) + "\n";
  return out;
}

Narrative read_narrative(std::istream& in) {
  Narrative n;
  std::string line;
  bool in_events = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("@state", 0) == 0) {
      in_events = false;
      StateSlice slice;
      slice.time_index = std::stoi(trim(t.substr(6)));
      n.states.push_back(std::move(slice));
      continue;
    }
    if (t == "@events") {
      in_events = true;
      continue;
    }
    if (in_events) {
      n.events.push_back(parse_event_line(t));
    } else {
      if (n.states.empty()) throw IoError("narrative data before the first @state header");
      apply_network_line(n.states.back().network, t);
    }
  }
  return n;
}

Narrative read_narrative_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_narrative(in);
}

std::string write_timeline(const Timeline& timeline) {
  std::string out;
  for (const Snapshot& s : timeline.snapshots) {
    out += "t" + std::to_string(s.time_index) + " ; " + format_instant_utc(s.representative_us);
    for (const TimedFeature& f : s.features) {
      out += " ; " + f.object_id + "@" + f.source_id;
    }
    out += "\n";
  }
  return out;
}

std::string write_explanations(const ExplainResult& result) {
  std::string out;
  if (!result.satisfiable) {
    out += result.budget_exhausted ? "# search budget exhausted\n" : "# no explanation\n";
    return out;
  }
  for (size_t e = 0; e < result.explanations.size(); ++e) {
    const Explanation& exp = result.explanations[e];
    out += "@explanation " + std::to_string(e + 1) + " ; cost=" + std::to_string(exp.cost) + "\n";
    for (const PlacedEvent& pe : exp.records) {
      out += "between ; " + std::to_string(pe.segment) + " ; " + std::to_string(pe.segment + 1) +
             " ; pos=" + std::to_string(pe.position) + " ; " + event_line(pe.event) + "\n";
    }
    for (auto [before, after] : exp.orderings) {
      out += "order ; " + std::to_string(before) + " < " + std::to_string(after) + "\n";
    }
  }
  return out;
}

std::string write_instances(const std::vector<ProcessInstance>& instances,
                            const Narrative& narrative) {
  std::string out;
  for (const ProcessInstance& inst : instances) {
    std::string binding;
    for (const auto& [var, value] : inst.binding) {
      if (!binding.empty()) binding += " ";
      binding += var + "=" + value;
    }
    out += inst.rule + " ; [" + std::to_string(inst.start) + "," + std::to_string(inst.end) +
           "] ; " + binding + " ;";
    for (int e : inst.supporting) {
      out += " (" + event_line(narrative.events[e]) + ")";
    }
    out += "\n";
  }
  return out;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::uint64_t hash = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

}  // namespace geonarrate

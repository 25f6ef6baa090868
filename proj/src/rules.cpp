#include "geonarrate/rules.hpp"

#include <algorithm>

namespace geonarrate {

bool eval_during(int event_time, int start, int end) {
  return start <= event_time && event_time <= end;
}

bool eval_before(int first_time, int second_time) { return first_time < second_time; }

namespace {

using Binding = std::map<std::string, std::vector<std::string>>;

bool is_list_var(const std::string& var) { return !var.empty() && var.back() == '*'; }
std::string list_base(const std::string& var) { return var.substr(0, var.size() - 1); }

// Tries to unify an atom's variable list with an event's participants,
// extending `binding`. A list variable consumes the participants left over
// after the fixed ones; fixed variables after it bind from the tail.
bool unify(const RuleAtom& atom, const EventOccurrence& event, Binding& binding) {
  size_t fixed = 0;
  int list_at = -1;
  for (size_t v = 0; v < atom.vars.size(); ++v) {
    if (is_list_var(atom.vars[v])) {
      if (list_at >= 0) return false;  // one list per atom
      list_at = static_cast<int>(v);
    } else {
      ++fixed;
    }
  }
  const auto& parts = event.participants;
  if (list_at < 0) {
    if (parts.size() != atom.vars.size()) return false;
  } else if (parts.size() < fixed + 2) {
    return false;  // list capture needs at least two members
  }

  auto bind_one = [&](const std::string& var, const std::vector<std::string>& value) {
    auto it = binding.find(var);
    if (it != binding.end()) return it->second == value;
    binding[var] = value;
    return true;
  };

  size_t head = list_at < 0 ? atom.vars.size() : static_cast<size_t>(list_at);
  for (size_t v = 0; v < head; ++v) {
    if (!bind_one(atom.vars[v], {parts[v]})) return false;
  }
  if (list_at >= 0) {
    size_t tail = atom.vars.size() - head - 1;
    std::vector<std::string> captured(parts.begin() + head, parts.end() - tail);
    if (!bind_one(list_base(atom.vars[list_at]), captured)) return false;
    for (size_t v = 0; v < tail; ++v) {
      if (!bind_one(atom.vars[head + 1 + v], {parts[parts.size() - tail + v]})) return false;
    }
  }
  return true;
}

bool atom_accepts(const RuleAtom& atom, const EventOccurrence& event) {
  if (!atom.kinds.count(event.kind)) return false;
  if (atom.target) {
    if (event.kind != EventKind::transition || !event.target) return false;
    if (!atom.target->contains(static_cast<int>(*event.target))) return false;
  }
  return true;
}

}  // namespace

std::vector<ProcessInstance> match_rules(const Narrative& narrative,
                                         const std::vector<ProcessRule>& rules) {
  // Known object types, for rule validation and binding checks.
  std::set<std::string> known_types;
  std::map<std::string, std::string> type_of;
  for (const StateSlice& s : narrative.states) {
    for (int v = 0; v < s.network.size(); ++v) {
      const Variable& var = s.network.variable(v);
      known_types.insert(var.type);
      type_of[var.object_id] = var.type;
    }
  }

  std::vector<ProcessInstance> out;
  for (const ProcessRule& rule : rules) {
    std::map<std::string, std::string> var_type;
    for (const auto& [var, type] : rule.bindings) {
      if (type != "*" && !known_types.count(type)) {
        throw RuleError("rule '" + rule.name + "' references unknown object type '" + type + "'");
      }
      var_type[var] = type;
    }
    auto type_ok = [&](const std::string& var, const std::vector<std::string>& objects) {
      auto it = var_type.find(var);
      if (it == var_type.end()) {
        throw RuleError("rule '" + rule.name + "' uses undeclared variable '" + var + "'");
      }
      for (const std::string& o : objects) {
        auto t = type_of.find(o);
        if (t == type_of.end()) return false;
        if (it->second != "*" && t->second != it->second) return false;
      }
      return true;
    };

    // Backtracking over atoms: choose a witness event per atom.
    std::set<std::string> seen_bindings;
    std::vector<int> chosen(rule.pattern.size(), -1);
    std::vector<Binding> partial{Binding{}};

    auto temporal_ok = [&](const std::vector<int>& events) {
      for (size_t a = 0; a < rule.pattern.size(); ++a) {
        for (const RuleAtom::Temporal& t : rule.pattern[a].temporal) {
          int ta = narrative.events[events[a]].time_index;
          int tb = narrative.events[events[t.other_atom]].time_index;
          if (t.op == RuleAtom::TemporalOp::before && !eval_before(ta, tb)) return false;
          if (t.op == RuleAtom::TemporalOp::not_same_step && ta == tb) return false;
        }
      }
      return true;
    };

    // Enumerates complete witness combinations; records each satisfied
    // binding once, with the union of events over all of its witnesses.
    std::map<std::string, std::pair<Binding, std::set<int>>> matched;
    auto descend = [&](auto&& self, size_t atom_index, Binding binding) -> void {
      if (atom_index == rule.pattern.size()) {
        if (!temporal_ok(chosen)) return;
        std::string key;
        for (const auto& [var, value] : binding) {
          key += var + "=";
          for (const std::string& v : value) key += v + "|";
          key += ";";
        }
        auto& slot = matched[key];
        slot.first = binding;
        slot.second.insert(chosen.begin(), chosen.end());
        return;
      }
      const RuleAtom& atom = rule.pattern[atom_index];
      for (size_t e = 0; e < narrative.events.size(); ++e) {
        if (!atom_accepts(atom, narrative.events[e])) continue;
        Binding extended = binding;
        if (!unify(atom, narrative.events[e], extended)) continue;
        bool types_fine = true;
        for (const std::string& var : atom.vars) {
          std::string base = is_list_var(var) ? list_base(var) : var;
          if (!type_ok(base, extended.at(base))) {
            types_fine = false;
            break;
          }
        }
        if (!types_fine) continue;
        chosen[atom_index] = static_cast<int>(e);
        self(self, atom_index + 1, std::move(extended));
        chosen[atom_index] = -1;
      }
    };
    descend(descend, 0, Binding{});

    for (const auto& [key, entry] : matched) {
      ProcessInstance inst;
      inst.rule = rule.name;
      for (const auto& [var, value] : entry.first) {
        std::string joined;
        for (const std::string& v : value) {
          if (!joined.empty()) joined += ",";
          joined += v;
        }
        inst.binding.emplace_back(var, joined);
      }
      inst.supporting.assign(entry.second.begin(), entry.second.end());
      inst.start = narrative.events[inst.supporting.front()].time_index;
      inst.end = inst.start;
      for (int e : inst.supporting) {
        inst.start = std::min(inst.start, narrative.events[e].time_index);
        inst.end = std::max(inst.end, narrative.events[e].time_index);
      }
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace geonarrate

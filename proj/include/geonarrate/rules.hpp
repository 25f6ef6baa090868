#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geonarrate/events.hpp"

namespace geonarrate {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One event atom of a rule pattern. Kinds form a disjunction (a single atom
// may accept shrinkage or disappearance); participant variables bind against
// the event's participant list; a variable ending in '*' captures the
// event's remaining participants as a list.
struct RuleAtom {
  std::set<EventKind> kinds;
  std::vector<std::string> vars;
  std::optional<RelationSet> target;  // transition targets accepted

  enum class TemporalOp { before, not_same_step };
  struct Temporal {
    TemporalOp op;
    int other_atom;  // index into the pattern
  };
  std::vector<Temporal> temporal;
};

// High-level abducible pattern: typed entity bindings plus a positive
// conjunction of event atoms with temporal constraints.
struct ProcessRule {
  std::string name;
  std::vector<std::pair<std::string, std::string>> bindings;  // var -> type ("*" = any)
  std::vector<RuleAtom> pattern;
};

struct ProcessInstance {
  std::string rule;
  std::vector<std::pair<std::string, std::string>> binding;  // var -> object id(s)
  int start = 0, end = 0;        // inclusive time-index interval
  std::vector<int> supporting;   // indices into the narrative's event list
};

// during(t, [t1, t2]) with inclusive bounds.
bool eval_during(int event_time, int start, int end);
// before(e, e'): strict ordering of two matched events.
bool eval_before(int first_time, int second_time);

// All maximal bindings satisfying a rule's types and pattern. Instances come
// out in deterministic order (rule order, then binding lexicographic).
// The reported interval spans the supporting events. Throws RuleError when a
// rule names an object type unknown to the narrative.
std::vector<ProcessInstance> match_rules(const Narrative& narrative,
                                         const std::vector<ProcessRule>& rules);

}  // namespace geonarrate

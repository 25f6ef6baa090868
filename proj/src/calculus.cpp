#include "geonarrate/calculus.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace geonarrate {

namespace {

std::vector<int> bfs_distances(const std::vector<RelationSet>& adjacency, int n) {
  std::vector<int> dist(n * n, -1);
  for (int start = 0; start < n; ++start) {
    dist[start * n + start] = 0;
    std::deque<int> queue{start};
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (int next : adjacency[cur]) {
        if (dist[start * n + next] < 0) {
          dist[start * n + next] = dist[start * n + cur] + 1;
          queue.push_back(next);
        }
      }
    }
  }
  return dist;
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

}  // namespace

Calculus::Calculus(std::string name, std::vector<std::string> atom_names, int identity,
                   std::vector<int> converse_table, std::vector<RelationSet> composition_table,
                   std::vector<RelationSet> neighbor_table)
    : name_(std::move(name)),
      atom_names_(std::move(atom_names)),
      identity_(identity),
      converse_(std::move(converse_table)),
      composition_(std::move(composition_table)),
      neighbors_(std::move(neighbor_table)) {
  const int n = atom_count();
  if (n <= 0 || n > RelationSet::kMaxAtoms) throw std::logic_error("calculus: bad atom count");
  if (static_cast<int>(converse_.size()) != n || static_cast<int>(composition_.size()) != n * n ||
      static_cast<int>(neighbors_.size()) != n || identity_ < 0 || identity_ >= n) {
    throw std::logic_error("calculus: table sizes do not match atom count");
  }
  distance_ = bfs_distances(neighbors_, n);
  for (int d : distance_) diameter_ = std::max(diameter_, d);
}

std::optional<int> Calculus::atom_by_name(std::string_view name) const {
  for (int a = 0; a < atom_count(); ++a) {
    if (atom_names_[a] == name) return a;
  }
  return std::nullopt;
}

RelationSet Calculus::converse(RelationSet rs) const {
  RelationSet out;
  for (int a : rs) out.insert(converse_[a]);
  return out;
}

RelationSet Calculus::compose(RelationSet lhs, RelationSet rhs) const {
  RelationSet out;
  for (int a : lhs) {
    for (int b : rhs) out |= compose(a, b);
  }
  return out;
}

int Calculus::cnd_distance(RelationSet from, int to) const {
  int best = -1;
  for (int a : from) {
    int d = cnd_distance(a, to);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

std::string Calculus::set_to_string(RelationSet rs) const {
  std::string out = "{";
  bool first = true;
  for (int a : rs) {
    if (!first) out += ",";
    out += atom_names_[a];
    first = false;
  }
  out += "}";
  return out;
}

std::optional<RelationSet> Calculus::set_from_string(std::string_view text) const {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '{' || t.back() != '}') return std::nullopt;
  RelationSet out;
  std::string inner = t.substr(1, t.size() - 2);
  if (trim(inner).empty()) return out;
  for (const std::string& part : split_on(inner, ',')) {
    auto a = atom_by_name(part);
    if (!a) return std::nullopt;
    out.insert(*a);
  }
  return out;
}

void Calculus::validate() const {
  const int n = atom_count();
  for (int a = 0; a < n; ++a) {
    if (converse_[converse_[a]] != a) throw std::logic_error(name_ + ": converse not an involution");
    if (compose(identity_, a) != RelationSet::single(a) ||
        compose(a, identity_) != RelationSet::single(a)) {
      throw std::logic_error(name_ + ": identity law violated for " + atom_names_[a]);
    }
    if (neighbors_[a].contains(a)) throw std::logic_error(name_ + ": neighborhood not irreflexive");
    for (int b : neighbors_[a]) {
      if (!neighbors_[b].contains(a)) throw std::logic_error(name_ + ": neighborhood not symmetric");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      RelationSet lhs = converse(compose(a, b));
      RelationSet rhs = compose(converse_[b], converse_[a]);
      if (lhs != rhs) {
        throw std::logic_error(name_ + ": converse/composition law violated at " + atom_names_[a] +
                               "," + atom_names_[b]);
      }
      if (distance_[a * n + b] < 0) throw std::logic_error(name_ + ": neighborhood not connected");
    }
  }
}

namespace {

// --- RCC-8 tables -----------------------------------------------------------
//
// Tag order: dc ec po eq tpp ntpp tppi ntppi (bits 1,2,4,8,16,32,64,128).
// The composition table and the neighborhood edge set are locked by the
// disk-sampling oracles in the test suite; see tests/test_calculus.cpp.

constexpr RelationSet::Bits DC = 1, EC = 2, PO = 4, EQ = 8, TPP = 16, NTPP = 32, TPPI = 64,
                            NTPPI = 128;
constexpr RelationSet::Bits ALL8 = 255;

constexpr RelationSet::Bits kRcc8Composition[64] = {
    // dc ∘ ...
    ALL8,                          // dc
    DC | EC | PO | TPP | NTPP,     // ec
    DC | EC | PO | TPP | NTPP,     // po
    DC,                            // eq
    DC | EC | PO | TPP | NTPP,     // tpp
    DC | EC | PO | TPP | NTPP,     // ntpp
    DC,                            // tppi
    DC,                            // ntppi
    // ec ∘ ...
    DC | EC | PO | TPPI | NTPPI,   // dc
    DC | EC | PO | EQ | TPP | TPPI,// ec
    DC | EC | PO | TPP | NTPP,     // po
    EC,                            // eq
    EC | PO | TPP | NTPP,          // tpp
    PO | TPP | NTPP,               // ntpp
    DC | EC,                       // tppi
    DC,                            // ntppi
    // po ∘ ...
    DC | EC | PO | TPPI | NTPPI,   // dc
    DC | EC | PO | TPPI | NTPPI,   // ec
    ALL8,                          // po
    PO,                            // eq
    PO | TPP | NTPP,               // tpp
    PO | TPP | NTPP,               // ntpp
    DC | EC | PO | TPPI | NTPPI,   // tppi
    DC | EC | PO | TPPI | NTPPI,   // ntppi
    // eq ∘ ...
    DC, EC, PO, EQ, TPP, NTPP, TPPI, NTPPI,
    // tpp ∘ ...
    DC,                            // dc
    DC | EC,                       // ec
    DC | EC | PO | TPP | NTPP,     // po
    TPP,                           // eq
    TPP | NTPP,                    // tpp
    NTPP,                          // ntpp
    DC | EC | PO | EQ | TPP | TPPI,// tppi
    DC | EC | PO | TPPI | NTPPI,   // ntppi
    // ntpp ∘ ...
    DC,                            // dc
    DC,                            // ec
    DC | EC | PO | TPP | NTPP,     // po
    NTPP,                          // eq
    NTPP,                          // tpp
    NTPP,                          // ntpp
    DC | EC | PO | TPP | NTPP,     // tppi
    ALL8,                          // ntppi
    // tppi ∘ ...
    DC | EC | PO | TPPI | NTPPI,   // dc
    EC | PO | TPPI | NTPPI,        // ec
    PO | TPPI | NTPPI,             // po
    TPPI,                          // eq
    PO | EQ | TPP | TPPI,          // tpp
    PO | TPP | NTPP,               // ntpp
    TPPI | NTPPI,                  // tppi
    NTPPI,                         // ntppi
    // ntppi ∘ ...
    DC | EC | PO | TPPI | NTPPI,   // dc
    PO | TPPI | NTPPI,             // ec
    PO | TPPI | NTPPI,             // po
    NTPPI,                         // eq
    PO | TPPI | NTPPI,             // tpp
    PO | EQ | TPP | NTPP | TPPI | NTPPI,  // ntpp
    NTPPI,                         // tppi
    NTPPI,                         // ntppi
};

// Neighborhood edges observed under continuous rigid motion of disks:
// dc-ec, ec-po, po-eq, po-tpp, po-tppi, tpp-ntpp, tppi-ntppi.
constexpr RelationSet::Bits kRcc8Neighbors[8] = {
    EC,                   // dc
    DC | PO,              // ec
    EC | EQ | TPP | TPPI, // po
    PO,                   // eq
    PO | NTPP,            // tpp
    TPP,                  // ntpp
    PO | NTPPI,           // tppi
    TPPI,                 // ntppi
};

Calculus build_rcc8() {
  std::vector<RelationSet> comp(64);
  for (int i = 0; i < 64; ++i) comp[i] = RelationSet(kRcc8Composition[i]);
  std::vector<RelationSet> nb(8);
  for (int i = 0; i < 8; ++i) nb[i] = RelationSet(kRcc8Neighbors[i]);
  Calculus c("rcc8", {"dc", "ec", "po", "eq", "tpp", "ntpp", "tppi", "ntppi"}, atom(Rcc8::eq),
             {0, 1, 2, 3, 6, 7, 4, 5}, std::move(comp), std::move(nb));
  c.validate();
  return c;
}

// --- qualitative size: total-order point algebra ----------------------------

constexpr RelationSet::Bits SM = 1, SE = 2, SL = 4, SALL = 7;

constexpr RelationSet::Bits kSizeComposition[9] = {
    SM,   SM, SALL,  // smaller ∘ {smaller, equal, larger}
    SM,   SE, SL,    // equal ∘ ...
    SALL, SL, SL,    // larger ∘ ...
};

Calculus build_size_order() {
  std::vector<RelationSet> comp(9);
  for (int i = 0; i < 9; ++i) comp[i] = RelationSet(kSizeComposition[i]);
  std::vector<RelationSet> nb = {RelationSet(SE), RelationSet(SM | SL), RelationSet(SE)};
  Calculus c("size", {"smaller", "equal", "larger"}, atom(SizeRel::equal), {2, 1, 0},
             std::move(comp), std::move(nb));
  c.validate();
  return c;
}

// Topology -> size entailment, by area semantics of plane regions.
constexpr RelationSet::Bits kSizeEntailment[8] = {
    SALL,  // dc
    SALL,  // ec
    SALL,  // po
    SE,    // eq
    SM,    // tpp
    SM,    // ntpp
    SL,    // tppi
    SL,    // ntppi
};

}  // namespace

const Calculus& Calculus::rcc8() {
  static const Calculus instance = build_rcc8();
  return instance;
}

const Calculus& Calculus::size_order() {
  static const Calculus instance = build_size_order();
  return instance;
}

RelationSet size_entailed(RelationSet topo) {
  RelationSet out;
  for (int a : topo) out |= RelationSet(kSizeEntailment[a]);
  return out;
}

RelationSet topo_compatible_with_size(RelationSet size) {
  RelationSet out;
  for (int a = 0; a < kRcc8AtomCount; ++a) {
    if (!(RelationSet(kSizeEntailment[a]) & size).empty()) out.insert(a);
  }
  return out;
}

Calculus Calculus::from_text(std::istream& in) {
  std::string line;
  std::vector<std::string> atoms;
  std::map<std::string, int> index;
  int identity = -1;
  std::vector<int> conv;
  std::vector<RelationSet> comp;
  std::vector<RelationSet> nb;
  std::vector<std::string> entries;

  auto parse_set = [&](const std::string& text, const std::vector<std::string>& names) {
    RelationSet out;
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
      throw std::runtime_error("calculus text: expected {…} set, got '" + text + "'");
    std::string inner = t.substr(1, t.size() - 2);
    if (trim(inner).empty()) return out;
    for (const std::string& part : split_on(inner, ',')) {
      auto it = index.find(part);
      if (it == index.end()) throw std::runtime_error("calculus text: unknown atom '" + part + "'");
      out.insert(it->second);
      (void)names;
    }
    return out;
  };

  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    entries.push_back(t);
  }
  // First pass: atom declaration must come first so set parsing can resolve names.
  for (const std::string& e : entries) {
    auto parts = split_on(e, ';');
    if (parts.size() >= 2 && parts[0] == "atoms") {
      for (const std::string& a : split_on(parts[1], ',')) {
        index[a] = static_cast<int>(atoms.size());
        atoms.push_back(a);
      }
      break;
    }
  }
  if (atoms.empty()) throw std::runtime_error("calculus text: missing 'atoms ; a,b,...' line");
  const int n = static_cast<int>(atoms.size());
  conv.assign(n, -1);
  comp.assign(n * n, RelationSet());
  nb.assign(n, RelationSet());

  for (const std::string& e : entries) {
    auto parts = split_on(e, ';');
    if (parts.empty()) continue;
    if (parts[0] == "atoms") continue;
    if (parts[0] == "identity") {
      if (parts.size() != 2 || !index.count(parts[1]))
        throw std::runtime_error("calculus text: bad identity line");
      identity = index[parts[1]];
    } else if (parts[0] == "converse") {
      if (parts.size() != 3 || !index.count(parts[1]) || !index.count(parts[2]))
        throw std::runtime_error("calculus text: bad converse line");
      conv[index[parts[1]]] = index[parts[2]];
    } else if (parts[0] == "neighbor") {
      if (parts.size() != 3 || !index.count(parts[1]))
        throw std::runtime_error("calculus text: bad neighbor line");
      nb[index[parts[1]]] = parse_set(parts[2], atoms);
    } else {
      if (parts.size() != 3 || !index.count(parts[0]) || !index.count(parts[1]))
        throw std::runtime_error("calculus text: bad composition line '" + e + "'");
      comp[index[parts[0]] * n + index[parts[1]]] = parse_set(parts[2], atoms);
    }
  }
  if (identity < 0) throw std::runtime_error("calculus text: missing identity");
  for (int c : conv) {
    if (c < 0) throw std::runtime_error("calculus text: incomplete converse table");
  }
  Calculus c("custom", atoms, identity, conv, comp, nb);
  c.validate();
  return c;
}

}  // namespace geonarrate

#include "geonarrate/network.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace geonarrate {

ConstraintNetwork::ConstraintNetwork(const Calculus& calc) : calc_(&calc) {}

int ConstraintNetwork::add_variable(Variable v) {
  if (index_.count(v.name)) throw std::invalid_argument("duplicate variable name: " + v.name);
  const int n = size();
  std::vector<RelationSet> grown(static_cast<size_t>(n + 1) * (n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grown[static_cast<size_t>(i) * (n + 1) + j] = at(i, j);
  }
  labels_ = std::move(grown);
  index_[v.name] = n;
  vars_.push_back(std::move(v));
  for (int i = 0; i <= n; ++i) {
    at(i, n) = calc_->universal();
    at(n, i) = calc_->universal();
  }
  at(n, n) = RelationSet::single(calc_->identity());
  return n;
}

int ConstraintNetwork::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

RelationSet ConstraintNetwork::label(int i, int j) const {
  if (i == j) return RelationSet::single(calc_->identity());
  return at(i, j);
}

void ConstraintNetwork::set_label(int i, int j, RelationSet rs) {
  if (i == j) return;
  at(i, j) = rs;
  at(j, i) = calc_->converse(rs);
}

std::vector<std::pair<int, int>> ConstraintNetwork::active_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i) {
    if (!vars_[i].exists) continue;
    for (int j = i + 1; j < size(); ++j) {
      if (vars_[j].exists) out.emplace_back(i, j);
    }
  }
  return out;
}

bool ConstraintNetwork::has_empty_active_label() const {
  for (auto [i, j] : active_pairs()) {
    if (at(i, j).empty()) return true;
  }
  return false;
}

void ConstraintNetwork::remove_variable(int victim) {
  const int n = size();
  std::vector<RelationSet> shrunk(static_cast<size_t>(n - 1) * (n - 1));
  for (int i = 0, si = 0; i < n; ++i) {
    if (i == victim) continue;
    for (int j = 0, sj = 0; j < n; ++j) {
      if (j == victim) continue;
      shrunk[static_cast<size_t>(si) * (n - 1) + sj] = at(i, j);
      ++sj;
    }
    ++si;
  }
  labels_ = std::move(shrunk);
  vars_.erase(vars_.begin() + victim);
  index_.clear();
  for (int i = 0; i < size(); ++i) index_[vars_[i].name] = i;
}

std::string ConstraintNetwork::state_key() const {
  std::string key;
  for (int i = 0; i < size(); ++i) {
    key += vars_[i].exists ? '1' : '0';
  }
  key += '|';
  for (auto [i, j] : active_pairs()) {
    RelationSet::Bits b = at(i, j).bits();
    key += static_cast<char>(b & 0xff);
    key += static_cast<char>((b >> 8) & 0xff);
  }
  return key;
}

bool ConstraintNetwork::operator==(const ConstraintNetwork& other) const {
  if (size() != other.size()) return false;
  for (int i = 0; i < size(); ++i) {
    const Variable& a = vars_[i];
    const Variable& b = other.vars_[i];
    if (a.name != b.name || a.exists != b.exists) return false;
  }
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (at(i, j) != other.at(i, j)) return false;
    }
  }
  return true;
}

ClosureResult algebraic_closure(ConstraintNetwork net) {
  const Calculus& calc = net.calculus();
  const int n = net.size();
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (net.variable(i).exists) active.push_back(i);
  }

  ClosureResult result;
  // Work queue of dirtied pairs; refining (i,j) can tighten any (i,k)/(k,j).
  std::deque<std::pair<int, int>> queue;
  std::vector<char> queued(static_cast<size_t>(n) * n, 0);
  auto push = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    if (!queued[static_cast<size_t>(i) * n + j]) {
      queued[static_cast<size_t>(i) * n + j] = 1;
      queue.emplace_back(i, j);
    }
  };
  for (size_t a = 0; a < active.size(); ++a) {
    for (size_t b = a + 1; b < active.size(); ++b) {
      int i = active[a], j = active[b];
      if (net.label(i, j).empty()) {
        result.consistent = false;
        result.fail_i = i;
        result.fail_j = j;
        result.network = std::move(net);
        return result;
      }
      push(i, j);
    }
  }

  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    queued[static_cast<size_t>(i) * n + j] = 0;
    for (int k : active) {
      if (k == i || k == j) continue;
      RelationSet ik = net.label(i, k) & calc.compose(net.label(i, j), net.label(j, k));
      if (ik != net.label(i, k)) {
        net.set_label(i, k, ik);
        if (ik.empty()) {
          result.consistent = false;
          result.fail_i = i;
          result.fail_j = k;
          result.fail_via = j;
          result.network = std::move(net);
          return result;
        }
        push(i, k);
      }
      RelationSet kj = net.label(k, j) & calc.compose(net.label(k, i), net.label(i, j));
      if (kj != net.label(k, j)) {
        net.set_label(k, j, kj);
        if (kj.empty()) {
          result.consistent = false;
          result.fail_i = k;
          result.fail_j = j;
          result.fail_via = i;
          result.network = std::move(net);
          return result;
        }
        push(k, j);
      }
    }
  }
  result.consistent = true;
  result.network = std::move(net);
  return result;
}

bool is_scenario(const ConstraintNetwork& net) {
  for (auto [i, j] : net.active_pairs()) {
    if (!net.label(i, j).singleton()) return false;
  }
  return true;
}

namespace {

void enumerate_rec(const ConstraintNetwork& closed, std::vector<ConstraintNetwork>& out,
                   const std::optional<std::size_t>& limit) {
  if (limit && out.size() >= *limit) return;
  // First non-singleton pair in deterministic pair order.
  for (auto [i, j] : closed.active_pairs()) {
    RelationSet l = closed.label(i, j);
    if (l.singleton()) continue;
    for (int a : l) {  // tag order
      ConstraintNetwork branch = closed;
      branch.set_label(i, j, RelationSet::single(a));
      ClosureResult r = algebraic_closure(std::move(branch));
      if (r.consistent) enumerate_rec(r.network, out, limit);
      if (limit && out.size() >= *limit) return;
    }
    return;
  }
  out.push_back(closed);
}

}  // namespace

std::vector<ConstraintNetwork> enumerate_scenarios(const ConstraintNetwork& net,
                                                   std::optional<std::size_t> limit) {
  std::vector<ConstraintNetwork> out;
  ClosureResult r = algebraic_closure(net);
  if (!r.consistent) return out;
  enumerate_rec(r.network, out, limit);
  return out;
}

bool is_consistent(const ConstraintNetwork& net) {
  ClosureResult r = algebraic_closure(net);
  if (!r.consistent) return false;
  if (is_scenario(r.network)) return true;
  return !enumerate_scenarios(r.network, std::size_t{1}).empty();
}

}  // namespace geonarrate

#include "cornbn/dag.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

Dag::Dag(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), parents_(nodes_.size()), children_(nodes_.size()) {
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("duplicate node '{}'", nodes_[i]));
    }
  }
}

Dag::Dag(std::vector<std::string> nodes,
         const std::vector<std::pair<std::string, std::string>>& edges)
    : Dag(std::move(nodes)) {
  for (const auto& [p, c] : edges) {
    const int pi = index_of(p);
    const int ci = index_of(c);
    if (pi == ci) throw Error(ErrorKind::CycleError, fmt::format("self-loop on '{}'", p));
    if (has_edge(pi, ci)) {
      throw Error(ErrorKind::DuplicateEdge, fmt::format("duplicate edge {} -> {}", p, c));
    }
    if (creates_cycle(pi, ci)) {
      throw Error(ErrorKind::CycleError, fmt::format("edge {} -> {} closes a cycle", p, c));
    }
    insert_edge(pi, ci);
  }
}

int Dag::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw Error(ErrorKind::UnknownVariable, fmt::format("unknown node '{}'", name));
  }
  return it->second;
}

void Dag::check_node(int node) const {
  if (node < 0 || node >= size()) {
    throw Error(ErrorKind::UnknownVariable, fmt::format("node index {} out of range", node));
  }
}

std::vector<std::string> Dag::parent_names(int node) const {
  std::vector<std::string> out;
  for (int p : parents(node)) out.push_back(nodes_[p]);
  return out;
}

bool Dag::has_edge(int parent, int child) const {
  check_node(parent);
  check_node(child);
  const auto& ps = parents_[child];
  return std::binary_search(ps.begin(), ps.end(), parent);
}

bool Dag::has_edge(std::string_view parent, std::string_view child) const {
  return has_edge(index_of(parent), index_of(child));
}

int Dag::edge_count() const {
  int n = 0;
  for (const auto& ps : parents_) n += static_cast<int>(ps.size());
  return n;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (int p = 0; p < size(); ++p) {
    for (int c : children_[p]) out.emplace_back(p, c);
  }
  return out;
}

bool Dag::reaches(int from, int to) const {
  if (from == to) return true;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int c : children_[u]) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

bool Dag::creates_cycle(int parent, int child) const {
  check_node(parent);
  check_node(child);
  return reaches(child, parent);
}

void Dag::insert_edge(int parent, int child) {
  auto& ps = parents_[child];
  ps.insert(std::lower_bound(ps.begin(), ps.end(), parent), parent);
  auto& cs = children_[parent];
  cs.insert(std::lower_bound(cs.begin(), cs.end(), child), child);
}

Dag Dag::add_edge(int parent, int child) const {
  check_node(parent);
  check_node(child);
  if (parent == child) {
    throw Error(ErrorKind::CycleError, fmt::format("self-loop on '{}'", nodes_[parent]));
  }
  if (has_edge(parent, child)) {
    throw Error(ErrorKind::DuplicateEdge,
                fmt::format("edge {} -> {} already present", nodes_[parent], nodes_[child]));
  }
  if (creates_cycle(parent, child)) {
    throw Error(ErrorKind::CycleError,
                fmt::format("edge {} -> {} closes a cycle", nodes_[parent], nodes_[child]));
  }
  Dag out = *this;
  out.insert_edge(parent, child);
  return out;
}

Dag Dag::add_edge(std::string_view parent, std::string_view child) const {
  return add_edge(index_of(parent), index_of(child));
}

Dag Dag::remove_edge(int parent, int child) const {
  if (!has_edge(parent, child)) {
    throw Error(ErrorKind::UnknownEdge,
                fmt::format("no edge {} -> {}", nodes_[parent], nodes_[child]));
  }
  Dag out = *this;
  auto& ps = out.parents_[child];
  ps.erase(std::lower_bound(ps.begin(), ps.end(), parent));
  auto& cs = out.children_[parent];
  cs.erase(std::lower_bound(cs.begin(), cs.end(), child));
  return out;
}

Dag Dag::reverse_edge(int parent, int child) const {
  return remove_edge(parent, child).add_edge(child, parent);
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> indegree(nodes_.size());
  for (int v = 0; v < size(); ++v) indegree[v] = static_cast<int>(parents_[v].size());
  std::vector<int> ready;
  for (int v = size() - 1; v >= 0; --v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    // Smallest index first keeps the order deterministic.
    auto it = std::min_element(ready.begin(), ready.end());
    const int u = *it;
    ready.erase(it);
    order.push_back(u);
    for (int c : children_[u]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  return order;
}

std::vector<int> Dag::ancestors_of(const std::vector<int>& nodes) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack;
  for (int v : nodes) {
    check_node(v);
    if (!seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int p : parents_[u]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> out;
  for (int v = 0; v < size(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

EquivalenceSignature equivalence_signature(const Dag& dag) {
  EquivalenceSignature sig;
  for (auto [p, c] : dag.edges()) sig.skeleton.emplace_back(std::min(p, c), std::max(p, c));
  std::sort(sig.skeleton.begin(), sig.skeleton.end());
  for (int c = 0; c < dag.size(); ++c) {
    const auto& ps = dag.parents(c);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        const int a = ps[i];
        const int b = ps[j];
        if (!dag.has_edge(a, b) && !dag.has_edge(b, a)) sig.colliders.emplace_back(a, c, b);
      }
    }
  }
  std::sort(sig.colliders.begin(), sig.colliders.end());
  return sig;
}

}  // namespace cornbn

#pragma once

#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cornbn {

using Edge = std::pair<int, int>;  // (parent, child) node indices

/// Directed acyclic graph over named nodes. Values are immutable: every
/// mutation returns a new graph and leaves the receiver unchanged.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::vector<std::string> nodes);
  Dag(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(int node) const { return nodes_.at(node); }
  int index_of(std::string_view name) const;

  // Parents and children are kept sorted by node index.
  const std::vector<int>& parents(int node) const { return parents_.at(node); }
  const std::vector<int>& children(int node) const { return children_.at(node); }
  std::vector<std::string> parent_names(int node) const;

  bool has_edge(int parent, int child) const;
  bool has_edge(std::string_view parent, std::string_view child) const;
  int edge_count() const;
  // Sorted by (parent index, child index).
  std::vector<Edge> edges() const;

  // True when child already reaches parent, so parent->child would close a cycle.
  bool creates_cycle(int parent, int child) const;
  bool reaches(int from, int to) const;

  Dag add_edge(int parent, int child) const;
  Dag add_edge(std::string_view parent, std::string_view child) const;
  Dag remove_edge(int parent, int child) const;
  Dag reverse_edge(int parent, int child) const;

  std::vector<int> topological_order() const;
  std::vector<int> ancestors_of(const std::vector<int>& nodes) const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.nodes_ == b.nodes_ && a.parents_ == b.parents_;
  }

 private:
  void insert_edge(int parent, int child);
  void check_node(int node) const;

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
};

/// Skeleton plus v-structures: two DAGs are Markov equivalent iff these match.
struct EquivalenceSignature {
  std::vector<Edge> skeleton;                  // (min, max) pairs, sorted
  std::vector<std::tuple<int, int, int>> colliders;  // (a, c, b) with a < b, a->c<-b

  friend bool operator==(const EquivalenceSignature&, const EquivalenceSignature&) = default;
};

EquivalenceSignature equivalence_signature(const Dag& dag);

}  // namespace cornbn

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cornbn {

/// Conditional probability table P(node | parents).
///
/// Rows enumerate parent configurations in mixed radix with the first listed
/// parent most significant: row = ((s0 * c1 + s1) * c2 + s2) ... for parent
/// states s_i and cardinalities c_i. Columns are the node's bins. Serialized
/// models depend on this order.
class Cpt {
 public:
  static constexpr double kRowTolerance = 1e-9;

  Cpt() = default;
  Cpt(std::string node, std::vector<std::string> parents, std::vector<int> parent_cards,
      Eigen::MatrixXd table);

  const std::string& node() const { return node_; }
  const std::vector<std::string>& parents() const { return parents_; }
  const std::vector<int>& parent_cards() const { return parent_cards_; }
  const Eigen::MatrixXd& table() const { return table_; }

  int cardinality() const { return static_cast<int>(table_.cols()); }
  int row_count() const { return static_cast<int>(table_.rows()); }

  int row_index(std::span<const int> parent_states) const;
  std::vector<int> parent_states(int row) const;
  double prob(int state, std::span<const int> parent_states) const {
    return table_(row_index(parent_states), state);
  }

  friend bool operator==(const Cpt& a, const Cpt& b) {
    return a.node_ == b.node_ && a.parents_ == b.parents_ &&
           a.parent_cards_ == b.parent_cards_ && a.table_ == b.table_;
  }

 private:
  std::string node_;
  std::vector<std::string> parents_;
  std::vector<int> parent_cards_;
  Eigen::MatrixXd table_;
};

}  // namespace cornbn

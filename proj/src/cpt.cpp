#include "cornbn/cpt.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

Cpt::Cpt(std::string node, std::vector<std::string> parents, std::vector<int> parent_cards,
         Eigen::MatrixXd table)
    : node_(std::move(node)),
      parents_(std::move(parents)),
      parent_cards_(std::move(parent_cards)),
      table_(std::move(table)) {
  if (parents_.size() != parent_cards_.size()) {
    throw Error(ErrorKind::InvalidCpt, fmt::format("cpt '{}': parent list and cardinalities differ", node_));
  }
  long rows = 1;
  for (int c : parent_cards_) {
    if (c < 1) throw Error(ErrorKind::InvalidCpt, fmt::format("cpt '{}': parent cardinality < 1", node_));
    rows *= c;
  }
  if (table_.rows() != rows || table_.cols() < 1) {
    throw Error(ErrorKind::InvalidCpt,
                fmt::format("cpt '{}': table is {}x{}, expected {} rows", node_, table_.rows(),
                            table_.cols(), rows));
  }
  for (Eigen::Index r = 0; r < table_.rows(); ++r) {
    for (Eigen::Index k = 0; k < table_.cols(); ++k) {
      const double p = table_(r, k);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidCpt, fmt::format("cpt '{}': entry ({}, {}) = {} outside [0,1]", node_, r, k, p));
      }
    }
    const double sum = table_.row(r).sum();
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw Error(ErrorKind::InvalidCpt, fmt::format("cpt '{}': row {} sums to {}", node_, r, sum));
    }
  }
}

int Cpt::row_index(std::span<const int> parent_states) const {
  if (parent_states.size() != parent_cards_.size()) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("cpt '{}': wrong number of parent states", node_));
  }
  int row = 0;
  for (std::size_t i = 0; i < parent_cards_.size(); ++i) {
    if (parent_states[i] < 0 || parent_states[i] >= parent_cards_[i]) {
      throw Error(ErrorKind::BinOutOfRange, fmt::format("cpt '{}': parent state out of range", node_));
    }
    row = row * parent_cards_[i] + parent_states[i];
  }
  return row;
}

std::vector<int> Cpt::parent_states(int row) const {
  std::vector<int> states(parent_cards_.size());
  for (int i = static_cast<int>(parent_cards_.size()) - 1; i >= 0; --i) {
    states[i] = row % parent_cards_[i];
    row /= parent_cards_[i];
  }
  return states;
}

}  // namespace cornbn

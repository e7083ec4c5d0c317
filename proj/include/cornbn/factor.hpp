#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace cornbn {

/// Dense table over a set of discrete variables.
///
/// Variables are kept in ascending id order and laid out in mixed radix with
/// the first variable most significant, matching the CPT row convention.
/// A factor with no variables is a scalar.
template <typename Scalar>
class BasicFactor {
 public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicFactor() : values_(Values::Ones(1)) {}

  BasicFactor(std::vector<int> vars, std::vector<int> cards, Values values)
      : vars_(std::move(vars)), cards_(std::move(cards)), values_(std::move(values)) {
    if (vars_.size() != cards_.size()) throw std::invalid_argument("factor: vars/cards mismatch");
    if (!std::is_sorted(vars_.begin(), vars_.end()) ||
        std::adjacent_find(vars_.begin(), vars_.end()) != vars_.end()) {
      throw std::invalid_argument("factor: variables must be strictly ascending");
    }
    if (values_.size() != table_size(cards_)) throw std::invalid_argument("factor: wrong table size");
  }

  /// Build from a table laid out over `vars` in the given (arbitrary) order.
  static BasicFactor from_layout(const std::vector<int>& vars, const std::vector<int>& cards,
                                 const Values& values) {
    std::vector<int> perm(vars.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) { return vars[a] < vars[b]; });
    std::vector<int> sorted_vars, sorted_cards;
    for (int p : perm) {
      sorted_vars.push_back(vars[p]);
      sorted_cards.push_back(cards[p]);
    }
    // Stride of each source position inside the source layout.
    std::vector<Eigen::Index> src_stride(vars.size());
    Eigen::Index s = 1;
    for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
      src_stride[i] = s;
      s *= cards[i];
    }
    std::vector<Eigen::Index> stride(vars.size());
    for (std::size_t d = 0; d < perm.size(); ++d) stride[d] = src_stride[perm[d]];
    Values out(table_size(sorted_cards));
    walk(sorted_cards, {stride}, [&](Eigen::Index i, const Eigen::Index* idx) { out[i] = values[idx[0]]; });
    return BasicFactor(std::move(sorted_vars), std::move(sorted_cards), std::move(out));
  }

  const std::vector<int>& vars() const { return vars_; }
  const std::vector<int>& cards() const { return cards_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }
  Eigen::Index size() const { return values_.size(); }

  bool contains(int var) const { return std::binary_search(vars_.begin(), vars_.end(), var); }
  int position(int var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    return (it != vars_.end() && *it == var) ? static_cast<int>(it - vars_.begin()) : -1;
  }

  // Row-major strides of this factor, expanded onto `scope` (0 for absent vars).
  std::vector<Eigen::Index> strides_on(const std::vector<int>& scope) const {
    std::vector<Eigen::Index> own(vars_.size());
    Eigen::Index s = 1;
    for (int i = static_cast<int>(vars_.size()) - 1; i >= 0; --i) {
      own[i] = s;
      s *= cards_[i];
    }
    std::vector<Eigen::Index> out(scope.size(), 0);
    for (std::size_t d = 0; d < scope.size(); ++d) {
      const int p = position(scope[d]);
      if (p >= 0) out[d] = own[p];
    }
    return out;
  }

  static Eigen::Index table_size(const std::vector<int>& cards) {
    Eigen::Index n = 1;
    for (int c : cards) n *= c;
    return n;
  }

  // Odometer over `cards` (last digit fastest). For each linear position the
  // callback receives the matching offset into every stride set.
  template <typename Fn>
  static void walk(const std::vector<int>& cards, std::vector<std::vector<Eigen::Index>> strides,
                   Fn&& fn) {
    const std::size_t dims = cards.size();
    const std::size_t k = strides.size();
    std::vector<int> digit(dims, 0);
    std::vector<Eigen::Index> offset(k, 0);
    const Eigen::Index total = table_size(cards);
    for (Eigen::Index i = 0; i < total; ++i) {
      fn(i, offset.data());
      for (int d = static_cast<int>(dims) - 1; d >= 0; --d) {
        ++digit[d];
        for (std::size_t f = 0; f < k; ++f) offset[f] += strides[f][d];
        if (digit[d] < cards[d]) break;
        for (std::size_t f = 0; f < k; ++f) offset[f] -= strides[f][d] * cards[d];
        digit[d] = 0;
      }
    }
  }

 private:
  std::vector<int> vars_;
  std::vector<int> cards_;
  Values values_;
};

using Factor = BasicFactor<double>;

template <typename Scalar>
BasicFactor<Scalar> product(const BasicFactor<Scalar>& a, const BasicFactor<Scalar>& b) {
  std::vector<int> vars;
  std::vector<int> cards;
  std::size_t i = 0, j = 0;
  while (i < a.vars().size() || j < b.vars().size()) {
    if (j == b.vars().size() || (i < a.vars().size() && a.vars()[i] < b.vars()[j])) {
      vars.push_back(a.vars()[i]);
      cards.push_back(a.cards()[i++]);
    } else if (i == a.vars().size() || b.vars()[j] < a.vars()[i]) {
      vars.push_back(b.vars()[j]);
      cards.push_back(b.cards()[j++]);
    } else {
      if (a.cards()[i] != b.cards()[j]) throw std::invalid_argument("factor: cardinality clash");
      vars.push_back(a.vars()[i]);
      cards.push_back(a.cards()[i]);
      ++i;
      ++j;
    }
  }
  typename BasicFactor<Scalar>::Values out(BasicFactor<Scalar>::table_size(cards));
  const auto& av = a.values();
  const auto& bv = b.values();
  BasicFactor<Scalar>::walk(cards, {a.strides_on(vars), b.strides_on(vars)},
                            [&](Eigen::Index n, const Eigen::Index* idx) { out[n] = av[idx[0]] * bv[idx[1]]; });
  return BasicFactor<Scalar>(std::move(vars), std::move(cards), std::move(out));
}

template <typename Scalar>
BasicFactor<Scalar> operator*(const BasicFactor<Scalar>& a, const BasicFactor<Scalar>& b) {
  return product(a, b);
}

namespace detail {

template <typename Scalar, typename Pick>
BasicFactor<Scalar> collapse(const BasicFactor<Scalar>& f, int var, Pick&& pick) {
  const int p = f.position(var);
  if (p < 0) return f;
  std::vector<int> vars = f.vars();
  std::vector<int> cards = f.cards();
  const int card = cards[p];
  Eigen::Index inner = 1;
  for (std::size_t d = p + 1; d < cards.size(); ++d) inner *= cards[d];
  const Eigen::Index outer = f.size() / (inner * card);
  vars.erase(vars.begin() + p);
  cards.erase(cards.begin() + p);
  typename BasicFactor<Scalar>::Values out(outer * inner);
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index in = 0; in < inner; ++in) {
      out[o * inner + in] = pick([&](int k) { return f.values()[(o * card + k) * inner + in]; }, card);
    }
  }
  return BasicFactor<Scalar>(std::move(vars), std::move(cards), std::move(out));
}

}  // namespace detail

/// Marginalize `var` out of `f` (no-op when absent).
template <typename Scalar>
BasicFactor<Scalar> sum_out(const BasicFactor<Scalar>& f, int var) {
  return detail::collapse(f, var, [](auto at, int card) {
    Scalar s = 0;
    for (int k = 0; k < card; ++k) s += at(k);
    return s;
  });
}

/// Condition on `var = state`, dropping `var` from the scope.
template <typename Scalar>
BasicFactor<Scalar> reduce(const BasicFactor<Scalar>& f, int var, int state) {
  const int p = f.position(var);
  if (p >= 0 && (state < 0 || state >= f.cards()[p])) throw std::out_of_range("factor: state out of range");
  return detail::collapse(f, var, [state](auto at, int) { return at(state); });
}

}  // namespace cornbn

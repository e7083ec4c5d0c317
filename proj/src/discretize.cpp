#include "cornbn/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

namespace {

struct Segment {
  double count = 0;  // all values
  double sum = 0;
  double sumsq = 0;
  double cut_above = 0;  // cut between this segment and the next
  Eigen::VectorXd classes;
};

double class_loglik(const Eigen::VectorXd& counts) {
  const double n = counts.sum();
  double ll = 0.0;
  for (Eigen::Index c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0) ll += counts[c] * std::log(counts[c] / n);
  }
  return ll;
}

double sse(const Segment& s) {
  if (s.count == 0) return 0.0;
  return std::max(0.0, s.sumsq - s.sum * s.sum / s.count);
}

Segment merged(const Segment& a, const Segment& b) {
  Segment m;
  m.count = a.count + b.count;
  m.sum = a.sum + b.sum;
  m.sumsq = a.sumsq + b.sumsq;
  m.cut_above = b.cut_above;
  m.classes = a.classes + b.classes;
  return m;
}

}  // namespace

BinScheme discretize_column(std::span<const double> values, std::span<const int> target_bins,
                            int max_bins) {
  if (max_bins < 2) throw Error(ErrorKind::InvalidArgument, "max_bins must be at least 2");
  const bool supervised = !target_bins.empty();
  if (supervised && target_bins.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "target_bins length differs from values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "values must be finite");
  }

  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  const int n = static_cast<int>(order.size());
  int distinct = n > 0 ? 1 : 0;
  for (int i = 1; i < n; ++i) distinct += values[order[i]] != values[order[i - 1]];
  if (distinct < 2) {
    throw Error(ErrorKind::DegenerateColumn, "column has fewer than two distinct values");
  }

  int classes = 0;
  if (supervised) {
    for (int t : target_bins) classes = std::max(classes, t + 1);
  }

  // Equal-frequency micro-bin boundaries, snapped forward to the next change of value.
  const int micro = std::min(kMaxMicroBins, distinct);
  std::vector<int> starts{0};
  for (int i = 1; i < micro; ++i) {
    int j = std::max(static_cast<int>(static_cast<long>(i) * n / micro), starts.back() + 1);
    while (j < n && values[order[j]] == values[order[j - 1]]) ++j;
    if (j < n && j > starts.back()) starts.push_back(j);
  }

  std::vector<Segment> segs;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const int begin = starts[s];
    const int end = s + 1 < starts.size() ? starts[s + 1] : n;
    Segment seg;
    seg.classes = Eigen::VectorXd::Zero(std::max(classes, 1));
    for (int i = begin; i < end; ++i) {
      const double v = values[order[i]];
      seg.count += 1;
      seg.sum += v;
      seg.sumsq += v * v;
      if (supervised && target_bins[order[i]] >= 0) seg.classes[target_bins[order[i]]] += 1;
    }
    seg.cut_above = end < n ? 0.5 * (values[order[end - 1]] + values[order[end]])
                            : std::numeric_limits<double>::infinity();
    segs.push_back(std::move(seg));
  }

  double labeled = 0;
  for (const auto& s : segs) labeled += supervised ? s.classes.sum() : s.count;
  const double log_n = std::log(std::max(labeled, 1.0));
  const double penalty = 0.5 * log_n * (supervised ? std::max(classes - 1, 1) : 1);

  double total_sse = 0.0;
  for (const auto& s : segs) total_sse += sse(s);
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double spread = 0.0;
  for (double v : values) spread += (v - mean) * (v - mean);
  const double eps = 1e-12 * spread + std::numeric_limits<double>::min();

  while (segs.size() > 2) {
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
      const Segment m = merged(segs[i], segs[i + 1]);
      double cost;
      if (supervised) {
        cost = class_loglik(segs[i].classes) + class_loglik(segs[i + 1].classes) -
               class_loglik(m.classes);
      } else {
        const double after = total_sse - sse(segs[i]) - sse(segs[i + 1]) + sse(m);
        cost = 0.5 * n * std::log((after + eps) / (total_sse + eps));
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    const bool forced = static_cast<int>(segs.size()) > max_bins;
    if (!forced && best_cost >= penalty) break;
    const Segment m = merged(segs[best], segs[best + 1]);
    total_sse += sse(m) - sse(segs[best]) - sse(segs[best + 1]);
    segs[best] = m;
    segs.erase(segs.begin() + static_cast<long>(best) + 1);
  }

  std::vector<double> edges;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) edges.push_back(segs[i].cut_above);
  return BinScheme(std::move(edges));
}

BinScheme compute_bin_means(std::span<const double> values, const BinScheme& scheme) {
  const int k = scheme.bin_count();
  std::vector<double> sums(k, 0.0);
  std::vector<long> counts(k, 0);
  for (double v : values) {
    const int b = scheme.bin_of(v);
    sums[b] += v;
    ++counts[b];
  }
  std::vector<double> means(k);
  for (int b = 0; b < k; ++b) {
    if (counts[b] == 0) {
      throw Error(ErrorKind::EmptyBin,
                  fmt::format("bin {} ({}) has no training values", b, scheme.labels()[b]));
    }
    means[b] = sums[b] / static_cast<double>(counts[b]);
  }
  return scheme.with_bin_means(std::move(means));
}

}  // namespace cornbn

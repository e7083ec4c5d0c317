#include "cornbn/bin_scheme.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cornbn/errors.hpp"

namespace cornbn {

namespace {

// Labels follow the yield-table convention "0–131", "131–149", "178–above".
// The open lower bin reads "0–e" when its upper edge is positive (the
// agronomic variables are non-negative), otherwise "below–e".
std::vector<std::string> derive_labels(const std::vector<double>& edges) {
  std::vector<std::string> labels;
  if (edges.empty()) {
    labels.emplace_back("all");
    return labels;
  }
  const std::string dash = "–";
  labels.push_back((edges.front() > 0 ? std::string("0") : std::string("below")) + dash +
                   format_number(edges.front()));
  for (std::size_t i = 1; i < edges.size(); ++i) {
    labels.push_back(format_number(edges[i - 1]) + dash + format_number(edges[i]));
  }
  labels.push_back(format_number(edges.back()) + dash + "above");
  return labels;
}

}  // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

BinScheme::BinScheme(std::vector<double> edges, std::optional<std::vector<double>> bin_means)
    : edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) {
      throw Error(ErrorKind::InvalidArgument, "bin edges must be finite");
    }
    if (i > 0 && !(edges_[i - 1] < edges_[i])) {
      throw Error(ErrorKind::InvalidArgument, "bin edges must be strictly increasing");
    }
  }
  labels_ = derive_labels(edges_);
  if (bin_means) {
    if (static_cast<int>(bin_means->size()) != bin_count()) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("expected {} bin means, got {}", bin_count(), bin_means->size()));
    }
    for (int b = 0; b < bin_count(); ++b) {
      if (!contains(b, (*bin_means)[b])) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("bin mean {} lies outside bin {}", (*bin_means)[b], labels_[b]));
      }
    }
    bin_means_ = std::move(bin_means);
  }
}

int BinScheme::bin_of(double value) const {
  return static_cast<int>(std::upper_bound(edges_.begin(), edges_.end(), value) - edges_.begin());
}

bool BinScheme::contains(int bin, double value) const {
  if (bin < 0 || bin >= bin_count() || std::isnan(value)) return false;
  if (bin > 0 && value < edges_[bin - 1]) return false;
  if (bin < bin_count() - 1 && value >= edges_[bin]) return false;
  return true;
}

BinScheme BinScheme::with_bin_means(std::vector<double> means) const {
  return BinScheme(edges_, std::move(means));
}

}  // namespace cornbn

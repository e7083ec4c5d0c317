#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cornbn {

/// Partition of the real line into k bins by k-1 strictly increasing interior
/// cut points. Bin i covers [edges[i-1], edges[i]); the two outer bins are
/// unbounded, so every finite value lands in exactly one bin.
class BinScheme {
 public:
  BinScheme() = default;
  explicit BinScheme(std::vector<double> edges,
                     std::optional<std::vector<double>> bin_means = std::nullopt);

  int bin_count() const { return static_cast<int>(edges_.size()) + 1; }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<std::vector<double>>& bin_means() const { return bin_means_; }

  int bin_of(double value) const;
  bool contains(int bin, double value) const;

  BinScheme with_bin_means(std::vector<double> means) const;

  friend bool operator==(const BinScheme&, const BinScheme&) = default;

 private:
  std::vector<double> edges_;
  std::vector<std::string> labels_;
  std::optional<std::vector<double>> bin_means_;
};

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace cornbn

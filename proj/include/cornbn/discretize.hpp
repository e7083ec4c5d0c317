#pragma once

#include <span>

#include "cornbn/bin_scheme.hpp"

namespace cornbn {

inline constexpr int kMaxMicroBins = 32;

/// Bottom-up discretization of one continuous column.
///
/// Starts from min(32, #distinct) equal-frequency micro-bins whose cuts sit
/// halfway between neighbouring distinct values, then repeatedly merges the
/// adjacent pair that costs the least: lost log-likelihood of the target given
/// the bin when `target_bins` is supplied (entries < 0 are unlabeled), lost
/// Gaussian log-likelihood of the pooled within-bin variance otherwise.
/// Merging is forced while the bin count exceeds `max_bins` and continues
/// while the cost stays below the BIC penalty (ln N / 2) per freed parameter.
/// Never returns fewer than two bins.
BinScheme discretize_column(std::span<const double> values, std::span<const int> target_bins,
                            int max_bins);

inline BinScheme discretize_column(std::span<const double> values, int max_bins) {
  return discretize_column(values, {}, max_bins);
}

/// Attach per-bin arithmetic means of `values`. Throws EmptyBin when a bin
/// receives no value.
BinScheme compute_bin_means(std::span<const double> values, const BinScheme& scheme);

}  // namespace cornbn

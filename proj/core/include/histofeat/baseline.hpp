#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace histofeat {

// Fixed-length windows cut from a longer recording, used by the comparison
// feature sets. Windows start at multiples of stride; a trailing remainder
// shorter than length is dropped.
std::vector<std::span<const double>> segment(std::span<const double> values, std::size_t length,
                                             std::size_t stride);

// Eight summary statistics of one window, in order: mean, sample variance,
// sample standard deviation, skewness, kurtosis, RMS, peak absolute value,
// zero-crossing count. Constant windows report zero skewness and kurtosis.
std::vector<double> td_features(std::span<const double> values);

inline constexpr std::size_t kTimeDomainFeatureCount = 8;

// Normalized spectral energy in `bands` equal-width frequency bands of the
// mean-removed window (DC excluded). The entries sum to one unless the window
// is constant, in which case all bands are zero.
std::vector<double> fd_features(std::span<const double> values, std::size_t bands);

// Each window verbatim as one feature row.
std::vector<std::vector<double>> segmented_raw(std::span<const double> values, std::size_t length,
                                               std::size_t stride);

} // namespace histofeat

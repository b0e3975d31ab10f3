#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace histofeat {

// Equal-width amplitude bin geometry for one signal.
// edge(k) = origin + k*width for k = 0..count; the final bin is closed at
// max_amplitude so every in-range sample has a bin.
struct BinSpec {
    double origin = 0.0;        // = min amplitude of the source signal
    double width = 0.0;         // > 0, sensor units
    std::size_t count = 0;      // >= 1
    double max_amplitude = 0.0; // = max amplitude of the source signal

    double edge(std::size_t k) const { return origin + static_cast<double>(k) * width; }
};

// Hard cap on bin count; near-constant signals can otherwise blow up the
// feature dimensionality.
inline constexpr std::size_t kMaxBinCount = 65536;

// Sample standard deviation, N-1 denominator. Compensated two-pass so that
// shifting or scaling the data perturbs the result only at machine precision.
// Throws DataError for fewer than 2 samples.
double sample_std(std::span<const double> values);

// Optimal equal bin width 3.49*sigma/N^(1/3). Throws DataError when the
// signal is constant (sigma = 0, width undefined).
double scott_bin_width(std::span<const double> values);

// Same rule, direct substitution of precomputed statistics.
double scott_bin_width(double sigma, std::size_t n);

// Builds the bin geometry for a signal: origin = min, width from the rule
// above, count = ceil(range / width), clamped to at least 1. Throws DataError
// on constant signals and when count would exceed kMaxBinCount.
BinSpec make_bin_spec(std::span<const double> values);

// As above with an explicit width instead of the data-driven one.
BinSpec make_bin_spec_with_width(std::span<const double> values, double width);

// Bin index of x, or nullopt when x lies outside [origin, max_amplitude].
// Half-open bins [edge(k), edge(k+1)) except the last, which is closed.
std::optional<std::size_t> assign_bin(double x, const BinSpec& spec);

// Per-bin occupancy counts. Throws DataError if any value falls outside the
// spec's range; on success the counts sum to values.size().
std::vector<std::size_t> histogram_counts(std::span<const double> values, const BinSpec& spec);

} // namespace histofeat

#include "histofeat/histogram.hpp"

#include "histofeat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace histofeat {

namespace {

// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values, double shift) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double x = v - shift;
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double compensated_sum_sq(std::span<const double> values, double shift) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double d = v - shift;
        const double x = d * d;
        const double t = sum + x;
        if (sum >= x)
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace

double sample_std(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DataError("sample_std: need at least 2 samples");
    const double mean = compensated_sum(values, 0.0) / static_cast<double>(n);
    const double ss = compensated_sum_sq(values, mean);
    const double var = ss / static_cast<double>(n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

double scott_bin_width(double sigma, std::size_t n) {
    if (n < 2) throw DataError("scott_bin_width: need at least 2 samples");
    if (!(sigma > 0.0)) throw DataError("degenerate signal: zero bin width");
    return 3.49 * sigma / std::cbrt(static_cast<double>(n));
}

double scott_bin_width(std::span<const double> values) {
    return scott_bin_width(sample_std(values), values.size());
}

namespace {

BinSpec spec_from_range(double lo, double hi, double width) {
    if (!(width > 0.0)) throw DataError("make_bin_spec: bin width must be positive");
    if (!(hi > lo)) throw DataError("make_bin_spec: constant signal, no amplitude range");
    const double ratio = (hi - lo) / width;
    if (ratio > static_cast<double>(kMaxBinCount))
        throw DataError("make_bin_spec: bin count " + std::to_string(ratio) +
                        " exceeds cap of " + std::to_string(kMaxBinCount));
    std::size_t count = static_cast<std::size_t>(std::ceil(ratio));
    if (count == 0) count = 1;
    BinSpec spec{lo, width, count, hi};
    // ceil guarantees coverage in real arithmetic; rounding can still leave
    // edge(count) a hair under the maximum.
    if (spec.edge(count) < hi) {
        ++count;
        if (count > kMaxBinCount) throw DataError("make_bin_spec: bin count exceeds cap");
        spec.count = count;
    }
    return spec;
}

} // namespace

BinSpec make_bin_spec(std::span<const double> values) {
    const double width = scott_bin_width(values);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return spec_from_range(*lo, *hi, width);
}

BinSpec make_bin_spec_with_width(std::span<const double> values, double width) {
    if (values.size() < 2) throw DataError("make_bin_spec: need at least 2 samples");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return spec_from_range(*lo, *hi, width);
}

std::optional<std::size_t> assign_bin(double x, const BinSpec& spec) {
    if (!(x >= spec.origin) || !(x <= spec.max_amplitude)) return std::nullopt;
    const std::size_t m = spec.count;
    const double rel = (x - spec.origin) / spec.width;
    std::size_t k = rel <= 0.0 ? 0 : std::min(m - 1, static_cast<std::size_t>(rel));
    // Division can land one bin off; settle against the exact edges.
    while (k > 0 && x < spec.edge(k)) --k;
    while (k + 1 < m && x >= spec.edge(k + 1)) ++k;
    return k;
}

std::vector<std::size_t> histogram_counts(std::span<const double> values, const BinSpec& spec) {
    std::vector<std::size_t> counts(spec.count, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto k = assign_bin(values[i], spec);
        if (!k)
            throw DataError("histogram_counts: value " + std::to_string(values[i]) +
                            " at index " + std::to_string(i) + " outside bin range");
        ++counts[*k];
    }
    return counts;
}

} // namespace histofeat

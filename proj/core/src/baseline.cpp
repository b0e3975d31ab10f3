#include "histofeat/baseline.hpp"

#include "histofeat/errors.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace histofeat {

namespace {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// |X_k|^2 for k = 1..n/2 of a real sequence.
std::vector<double> spectrum_energies(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    std::vector<double> energy(half);
    if ((n & (n - 1)) == 0) {
        std::vector<std::complex<double>> a(x.begin(), x.end());
        fft_pow2(a);
        for (std::size_t k = 1; k <= half; ++k) energy[k - 1] = std::norm(a[k]);
        return energy;
    }
    for (std::size_t k = 1; k <= half; ++k) {
        double re = 0.0, im = 0.0;
        double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t t = 0; t < n; ++t) {
            double ang = w * static_cast<double>(t);
            re += x[t] * std::cos(ang);
            im += x[t] * std::sin(ang);
        }
        energy[k - 1] = re * re + im * im;
    }
    return energy;
}

} // namespace

std::vector<std::span<const double>> segment(std::span<const double> values, std::size_t length,
                                             std::size_t stride) {
    if (length == 0) throw DataError("segment: length must be positive");
    if (stride == 0) throw DataError("segment: stride must be positive");
    if (values.size() < length) {
        throw DataError("segment: window length " + std::to_string(length) +
                        " exceeds signal length " + std::to_string(values.size()));
    }
    std::vector<std::span<const double>> windows;
    for (std::size_t start = 0; start + length <= values.size(); start += stride) {
        windows.push_back(values.subspan(start, length));
    }
    return windows;
}

std::vector<double> td_features(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DataError("td_features: need at least 2 samples");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0, sum_sq = 0.0, peak = 0.0;
    for (double v : values) {
        double d = v - mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        sum_sq += v * v;
        peak = std::max(peak, std::fabs(v));
    }
    double variance = m2 / static_cast<double>(n - 1);
    double stddev = std::sqrt(variance);
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);

    double skew = 0.0, kurt = 0.0;
    if (m2 > 0.0) {
        skew = m3 / std::pow(m2, 1.5);
        kurt = m4 / (m2 * m2);
    }
    double rms = std::sqrt(sum_sq / static_cast<double>(n));

    double crossings = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (values[i] * values[i + 1] < 0.0) crossings += 1.0;
    }

    return {mean, variance, stddev, skew, kurt, rms, peak, crossings};
}

std::vector<double> fd_features(std::span<const double> values, std::size_t bands) {
    if (bands == 0) throw DataError("fd_features: need at least 1 band");
    if (values.size() < 2 * bands) {
        throw DataError("fd_features: segment of " + std::to_string(values.size()) +
                        " samples too short for " + std::to_string(bands) + " bands");
    }

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    std::vector<double> centered(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) centered[i] = values[i] - mean;

    std::vector<double> energy = spectrum_energies(centered);
    const std::size_t half = energy.size();

    std::vector<double> band_energy(bands, 0.0);
    double total = 0.0;
    for (std::size_t k = 1; k <= half; ++k) {
        std::size_t j = (k - 1) * bands / half;
        band_energy[j] += energy[k - 1];
        total += energy[k - 1];
    }
    if (total > 0.0) {
        for (double& e : band_energy) e /= total;
    }
    return band_energy;
}

std::vector<std::vector<double>> segmented_raw(std::span<const double> values, std::size_t length,
                                               std::size_t stride) {
    std::vector<std::vector<double>> rows;
    for (auto window : segment(values, length, stride)) {
        rows.emplace_back(window.begin(), window.end());
    }
    return rows;
}

} // namespace histofeat

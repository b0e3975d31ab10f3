#include "histofeat/feature_design.hpp"

#include "histofeat/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

namespace histofeat {

std::vector<std::vector<double>> partition_by_bin(std::span<const double> values,
                                                  const BinSpec& spec) {
    std::vector<std::vector<double>> bins(spec.count);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto k = assign_bin(values[i], spec);
        if (!k)
            throw DataError("partition_by_bin: value " + std::to_string(values[i]) +
                            " at index " + std::to_string(i) + " outside bin range");
        bins[*k].push_back(values[i]);
    }
    return bins;
}

std::size_t row_count(const std::vector<std::vector<double>>& partition) {
    if (partition.empty()) throw DataError("row_count: empty partition");
    std::size_t n = std::numeric_limits<std::size_t>::max();
    for (const auto& bin : partition) n = std::min(n, bin.size());
    return n;
}

FeatureMatrix design_features(const SignalSeries& series, const FeatureOptions& options) {
    const auto& values = series.values;
    if (values.empty()) throw DataError("design_features: empty signal");

    BinSpec spec;
    try {
        spec = options.bin_width_override > 0.0
                   ? make_bin_spec_with_width(values, options.bin_width_override)
                   : make_bin_spec(values);
    } catch (const DataError& e) {
        throw DataError("state '" + series.state_label + "': " + e.what());
    }

    const auto partition = partition_by_bin(values, spec);

    for (std::size_t k = 0; k < partition.size(); ++k) {
        if (partition[k].empty())
            throw DataError(
                "empty bin: no rectangular feature matrix (state '" + series.state_label +
                "', bin " + std::to_string(k) + " of " + std::to_string(spec.count) +
                ", [" + std::to_string(spec.edge(k)) + ", " + std::to_string(spec.edge(k + 1)) +
                ") holds no samples); pool more data or set bin_width_override");
    }

    std::size_t n = 0;
    if (options.fill_strategy == FillStrategy::truncate) {
        n = row_count(partition);
    } else {
        for (const auto& bin : partition) n = std::max(n, bin.size());
    }

    FeatureMatrix fm;
    fm.state_label = series.state_label;
    fm.bin_spec = spec;
    fm.entries.assign(n, std::vector<double>(spec.count));
    for (std::size_t k = 0; k < spec.count; ++k) {
        const auto& bin = partition[k];
        for (std::size_t r = 0; r < n; ++r)
            fm.entries[r][k] = bin[r % bin.size()];
    }
    return fm;
}

std::vector<std::size_t> subsample_even_indices(std::size_t available, std::size_t wanted) {
    std::vector<std::size_t> idx(wanted);
    if (wanted == 1) {
        idx[0] = 0;
        return idx;
    }
    for (std::size_t j = 0; j < wanted; ++j)
        idx[j] = j * (available - 1) / (wanted - 1);
    return idx;
}

LabeledDataset harmonize_dataset(const std::vector<FeatureMatrix>& matrices, ColumnAlign align) {
    if (matrices.size() < 2)
        throw DataError("harmonize_dataset: need at least 2 matrices");

    std::size_t m_star = std::numeric_limits<std::size_t>::max();
    for (const auto& fm : matrices) {
        if (fm.rows() == 0)
            throw DataError("harmonize_dataset: state '" + fm.state_label + "' has 0 rows");
        m_star = std::min(m_star, fm.cols());
    }

    LabeledDataset ds;
    ds.m_star = m_star;

    std::unordered_map<std::string, int> label_of;
    for (const auto& fm : matrices) {
        auto it = label_of.find(fm.state_label);
        int label;
        if (it == label_of.end()) {
            label = static_cast<int>(ds.label_names.size());
            label_of.emplace(fm.state_label, label);
            ds.label_names.push_back(fm.state_label);
        } else {
            label = it->second;
        }

        std::vector<std::size_t> cols;
        if (align == ColumnAlign::truncate_high) {
            cols.resize(m_star);
            for (std::size_t j = 0; j < m_star; ++j) cols[j] = j;
        } else {
            cols = subsample_even_indices(fm.cols(), m_star);
        }

        for (const auto& row : fm.entries) {
            std::vector<double> out(m_star);
            for (std::size_t j = 0; j < m_star; ++j) out[j] = row[cols[j]];
            ds.features.push_back(std::move(out));
            ds.labels.push_back(label);
        }
    }

    if (ds.label_names.size() < 2)
        throw DataError("harmonize_dataset: need at least 2 distinct states");
    return ds;
}

void check_dataset(const LabeledDataset& data, const char* who) {
    const std::string prefix(who);
    if (data.features.empty()) throw DataError(prefix + ": empty dataset");
    if (data.labels.size() != data.features.size()) {
        throw DataError(prefix + ": " + std::to_string(data.features.size()) + " rows but " +
                        std::to_string(data.labels.size()) + " labels");
    }
    for (std::size_t r = 0; r < data.features.size(); ++r) {
        if (data.features[r].size() != data.m_star) {
            throw DataError(prefix + ": row " + std::to_string(r) + " has " +
                            std::to_string(data.features[r].size()) + " features, expected " +
                            std::to_string(data.m_star));
        }
    }
    for (std::size_t r = 0; r < data.labels.size(); ++r) {
        if (data.labels[r] < 0 || static_cast<std::size_t>(data.labels[r]) >= data.label_names.size()) {
            throw DataError(prefix + ": label " + std::to_string(data.labels[r]) + " at row " +
                            std::to_string(r) + " outside the label-name table");
        }
    }
}

} // namespace histofeat

#pragma once

#include "histofeat/histogram.hpp"
#include "histofeat/signal.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace histofeat {

// Designed feature table for one health state: column k holds values drawn
// from amplitude bin k in their original temporal order, truncated (or cycled)
// to a common row count.
struct FeatureMatrix {
    std::vector<std::vector<double>> entries; // n rows of m values
    std::string state_label;
    BinSpec bin_spec;

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return entries.empty() ? bin_spec.count : entries.front().size(); }
};

// Feature rows from every state stacked together, columns harmonized to a
// common width, integer labels by state order of appearance.
struct LabeledDataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::string> label_names;
    std::size_t m_star = 0;

    std::size_t size() const { return features.size(); }
    std::size_t num_classes() const { return label_names.size(); }
};

// How rows are completed when bins hold unequal sample counts.
//   truncate: n = smallest bin count, longer bins drop their tail rows.
//   cycle:    n = largest bin count, shorter bins repeat from their start.
enum class FillStrategy { truncate, cycle };

// How per-state column counts are reconciled to the common m*.
//   truncate_high: keep the first m* columns (drops the sparse high bins).
//   subsample_even: keep m* evenly spaced columns including first and last.
enum class ColumnAlign { truncate_high, subsample_even };

struct FeatureOptions {
    FillStrategy fill_strategy = FillStrategy::truncate;
    ColumnAlign column_align = ColumnAlign::truncate_high;
    double bin_width_override = 0.0; // > 0 replaces the data-driven bin width
};

// Splits values into per-bin lists, preserving temporal order inside each bin.
// Throws DataError if any value falls outside the spec.
std::vector<std::vector<double>> partition_by_bin(std::span<const double> values,
                                                  const BinSpec& spec);

// Row count of the rectangular feature matrix: the smallest per-bin sample
// count, 0 when any bin is empty.
std::size_t row_count(const std::vector<std::vector<double>>& partition);

// Builds the designed feature matrix for one state: bin geometry from the
// signal (or the override width), values partitioned by bin, rows filled per
// options.fill_strategy. Throws DataError on degenerate signals and on empty
// bins (no rectangular matrix exists).
FeatureMatrix design_features(const SignalSeries& series, const FeatureOptions& options = {});

// Stacks per-state matrices into one labeled dataset with m* = min column
// count. Matrices sharing a state_label share a label (per-recording runs feed
// one matrix per file). Requires >= 2 distinct states and >= 1 row everywhere.
LabeledDataset harmonize_dataset(const std::vector<FeatureMatrix>& matrices,
                                 ColumnAlign align = ColumnAlign::truncate_high);

// Evenly spaced column picks used by ColumnAlign::subsample_even.
std::vector<std::size_t> subsample_even_indices(std::size_t available, std::size_t wanted);

// Throws DataError (prefixed with `who`) unless the dataset is non-empty and
// internally consistent: one label per row, uniform row width m_star, labels
// within the label-name table.
void check_dataset(const LabeledDataset& data, const char* who);

} // namespace histofeat

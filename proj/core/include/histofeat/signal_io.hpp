#pragma once

#include "histofeat/feature_design.hpp"
#include "histofeat/report.hpp"
#include "histofeat/signal.hpp"

#include <string>
#include <vector>

namespace histofeat {

// On-disk signal layouts.
//   csv:   one decimal amplitude per line; lines starting with '#' and blank
//          lines are skipped.
//   f64le: 8-byte magic "HFT1" (zero padded), 8-byte little-endian unsigned
//          record count, then count little-endian IEEE-754 doubles.
enum class SignalFormat { csv, f64le };

// Picks csv unless the path ends in .f64le or .bin.
SignalFormat guess_signal_format(const std::string& path);

// Reads one recording. Rejects non-finite samples and empty files; the
// returned series carries the given rate and labels. Throws IoError with the
// offending line (csv) or byte offset (f64le) on malformed input.
SignalSeries read_signal(const std::string& path, SignalFormat format,
                         double sample_rate_hz = 1.0, const std::string& state_label = "",
                         const std::string& source_id = "");

void write_signal(const SignalSeries& series, const std::string& path, SignalFormat format);

// Feature CSV: header "f1,...,fm,label", one row per sample, values printed
// with 17 significant digits so a read-back reproduces them bit for bit.
struct FeatureCsv {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
};

void write_feature_csv(const std::vector<std::vector<double>>& rows,
                       const std::vector<std::string>& labels, std::size_t cols,
                       const std::string& path);

void write_feature_matrix(const FeatureMatrix& matrix, const std::string& path);

FeatureCsv read_feature_csv(const std::string& path);

// Report JSON with keys per_class_tpr, per_class_fpr, fold_accuracies,
// acc_mean, acc_sd, classifier, k, seed.
void write_report(const EvalReport& report, const std::string& path);

// 2D projection CSV: header "x,y,label".
void write_projection_csv(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::vector<std::string>& labels, const std::string& path);

} // namespace histofeat

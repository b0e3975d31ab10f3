#pragma once

#include "histofeat/classifier.hpp"
#include "histofeat/feature_design.hpp"
#include "histofeat/report.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace histofeat {

// Seeded disjoint index sets covering 0..n-1 with sizes differing by at most
// one. The labeled overload additionally balances every class across folds to
// within one sample.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed);
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed,
                                                    const std::vector<int>& labels);

// Square count matrix: entry (i, j) = true class i predicted as class j.
struct ConfusionMatrix {
    std::size_t classes = 0;
    std::vector<std::size_t> counts; // row-major, classes x classes

    std::size_t& at(std::size_t i, std::size_t j) { return counts[i * classes + j]; }
    std::size_t at(std::size_t i, std::size_t j) const { return counts[i * classes + j]; }
    std::size_t total() const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 std::size_t classes);

// One-vs-rest true/false positive rates per class plus unweighted macro
// averages. A class with no true samples has no TPR: its flag is cleared and
// the macro average skips it.
struct ClassRates {
    std::vector<double> tpr;
    std::vector<double> fpr;
    std::vector<bool> tpr_defined;
    double macro_tpr = 0.0;
    double macro_fpr = 0.0;
};

ClassRates rates_from_confusion(const ConfusionMatrix& cm);

// Fold-accuracy standard deviation: sd(accs) / sqrt(k) with the N-1
// denominator inside sd.
double cv_sd(std::span<const double> fold_accs, std::size_t k);

// Per-fold view handed to the observer after each fold is scored.
struct FoldView {
    std::size_t fold_index;
    std::span<const std::size_t> train_indices;
    std::span<const std::size_t> test_indices;
    const ClassifierModel& model;
    const Prediction& prediction;
};

using FoldObserver = std::function<void(const FoldView&)>;

// Stratified k-fold cross-validation: trains one model per fold (each trainer
// fits its own standardization on that fold's training rows), scores the held
// out rows, pools the confusion matrix across folds, and reports accuracies
// in percent with the root-k-scaled fold standard deviation.
EvalReport cross_validate(const LabeledDataset& data, const ClassifierConfig& cfg, std::size_t k,
                          std::uint64_t seed, const FoldObserver& observer = nullptr);

struct Projection2D {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::string> labels;
};

// Mean-centered projection onto the top two principal directions, axes
// ordered by explained variance, each direction's largest-magnitude loading
// made positive so the output is reproducible.
Projection2D pca_project_2d(const LabeledDataset& data);

} // namespace histofeat

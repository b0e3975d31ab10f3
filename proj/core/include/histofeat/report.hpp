#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace histofeat {

// Cross-validation outcome for one classifier run. Accuracies are percentages;
// acc_sd is the fold standard deviation scaled by 1/sqrt(k). TPR/FPR come from
// the confusion matrix pooled over all test folds.
struct EvalReport {
    std::vector<double> per_class_tpr;
    std::vector<double> per_class_fpr;
    std::vector<double> fold_accuracies;
    double acc_mean = 0.0;
    double acc_sd = 0.0;
    std::string classifier;
    int k = 0;
    std::uint64_t seed = 0;
};

} // namespace histofeat

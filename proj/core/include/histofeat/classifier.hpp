#pragma once

#include "histofeat/feature_design.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace histofeat {

enum class ClassifierKind { nn, rf, svm };

std::string classifier_kind_name(ClassifierKind kind);
ClassifierKind classifier_kind_from_name(const std::string& name);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::nn;

    // nn
    std::size_t hidden1 = 40;
    std::size_t hidden2 = 15;
    double learning_rate = 1e-3;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;

    // rf
    std::size_t tree_count = 100;
    std::size_t max_depth = 0;          // 0 = unlimited
    std::size_t features_per_split = 0; // 0 = floor(sqrt(columns)), at least 1

    // svm
    double svm_c = 1.0;
    std::size_t svm_epochs = 300;

    std::uint64_t seed = 0;
};

// Per-column z-score transform fitted on training rows. Columns with zero
// spread pass through centered only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    static Standardizer fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> apply(const std::vector<double>& row) const;
    bool empty() const { return mean.empty(); }
};

struct NnParams {
    std::size_t in = 0, h1 = 0, h2 = 0, out = 0;
    // Row-major: w1 is h1 x in, w2 is h2 x h1, w3 is out x h2.
    std::vector<double> w1, b1, w2, b2, w3, b3;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double split_value = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;
};

struct Tree {
    std::vector<TreeNode> nodes; // node 0 is the root
};

struct SvmParams {
    std::vector<std::vector<double>> weights; // one vector per class
    std::vector<double> bias;
};

struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::nn;
    std::size_t input_width = 0;
    std::vector<std::string> label_names;
    Standardizer standardizer; // empty for rf
    NnParams nn;
    std::vector<Tree> trees;
    SvmParams svm;
};

struct Prediction {
    std::vector<int> labels;
    // One row per input row: softmax probabilities (nn), vote fractions (rf),
    // or decision values (svm).
    std::vector<std::vector<double>> scores;
};

// Two rectified hidden layers, softmax output, cross-entropy loss minimized
// by Adam over shuffled mini-batches; inputs standardized internally.
ClassifierModel train_nn(const LabeledDataset& data, const ClassifierConfig& cfg);

// Bootstrap-sampled trees split on Gini impurity over random feature subsets;
// split thresholds are actual training values, so predictions are invariant
// under strictly increasing per-feature transforms.
ClassifierModel train_rf(const LabeledDataset& data, const ClassifierConfig& cfg);

// Linear one-vs-rest hinge loss, full-batch subgradient descent with
// per-epoch step decay; inputs standardized internally.
ClassifierModel train_svm(const LabeledDataset& data, const ClassifierConfig& cfg);

ClassifierModel train_classifier(const LabeledDataset& data, const ClassifierConfig& cfg);

Prediction predict(const ClassifierModel& model, const std::vector<std::vector<double>>& rows);

// Compares analytic gradients of a freshly initialized network against
// central finite differences over every parameter; returns the largest
// relative error. Intended for small instances (<= 10 rows and columns).
double nn_gradient_check(const ClassifierConfig& cfg, const LabeledDataset& sample,
                         double fd_step = 1e-5);

// Same check on explicit parameters (rows used as-is, no standardization).
double nn_gradient_check(const NnParams& net, const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& labels, double fd_step = 1e-5);

void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);

} // namespace histofeat

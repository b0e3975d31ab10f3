#include "histofeat/classifier.hpp"

#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace histofeat {

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    double g = 1.0;
    for (std::size_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

int majority_label(const std::vector<std::size_t>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return static_cast<int>(best);
}

struct TreeBuilder {
    const std::vector<std::vector<double>>& rows;
    const std::vector<int>& labels;
    std::size_t num_classes;
    std::size_t mtry;
    std::size_t max_depth; // 0 = unlimited
    Rng& rng;
    Tree tree;

    int build(std::vector<std::size_t>& idx, std::size_t depth) {
        const int me = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::vector<std::size_t> counts(num_classes, 0);
        for (std::size_t r : idx) ++counts[static_cast<std::size_t>(labels[r])];
        const std::size_t n = idx.size();

        bool pure = false;
        for (std::size_t c : counts) {
            if (c == n) pure = true;
        }
        if (pure || n < 2 || (max_depth > 0 && depth >= max_depth)) {
            tree.nodes[static_cast<std::size_t>(me)].label = majority_label(counts);
            return me;
        }

        // Candidate features: a seeded partial shuffle of all columns.
        const std::size_t m = rows[0].size();
        std::vector<std::size_t> feat(m);
        std::iota(feat.begin(), feat.end(), std::size_t{0});
        const std::size_t tries = std::min(mtry, m);
        for (std::size_t j = 0; j < tries; ++j) {
            std::size_t pick = j + rng.next_below(m - j);
            std::swap(feat[j], feat[pick]);
        }

        double best_impurity = HUGE_VAL;
        std::size_t best_feature = 0;
        double best_value = 0.0;
        bool found = false;

        std::vector<std::pair<double, int>> ordered(n);
        std::vector<std::size_t> left_counts(num_classes), right_counts(num_classes);
        for (std::size_t j = 0; j < tries; ++j) {
            const std::size_t f = feat[j];
            for (std::size_t i = 0; i < n; ++i) {
                ordered[i] = {rows[idx[i]][f], labels[idx[i]]};
            }
            std::sort(ordered.begin(), ordered.end());

            std::fill(left_counts.begin(), left_counts.end(), std::size_t{0});
            for (std::size_t i = 0; i + 1 < n; ++i) {
                ++left_counts[static_cast<std::size_t>(ordered[i].second)];
                if (ordered[i].first == ordered[i + 1].first) continue;
                std::size_t nl = i + 1;
                std::size_t nr = n - nl;
                for (std::size_t c = 0; c < num_classes; ++c) {
                    right_counts[c] = counts[c] - left_counts[c];
                }
                double impurity = (static_cast<double>(nl) * gini(left_counts, nl) +
                                   static_cast<double>(nr) * gini(right_counts, nr)) /
                                  static_cast<double>(n);
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = f;
                    best_value = ordered[i].first;
                    found = true;
                }
            }
        }

        if (!found) {
            tree.nodes[static_cast<std::size_t>(me)].label = majority_label(counts);
            return me;
        }

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t r : idx) {
            (rows[r][best_feature] <= best_value ? left_idx : right_idx).push_back(r);
        }

        tree.nodes[static_cast<std::size_t>(me)].feature = static_cast<int>(best_feature);
        tree.nodes[static_cast<std::size_t>(me)].split_value = best_value;
        int l = build(left_idx, depth + 1);
        tree.nodes[static_cast<std::size_t>(me)].left = l;
        int r = build(right_idx, depth + 1);
        tree.nodes[static_cast<std::size_t>(me)].right = r;
        return me;
    }
};

} // namespace

ClassifierModel train_rf(const LabeledDataset& data, const ClassifierConfig& cfg) {
    if (cfg.kind != ClassifierKind::rf) throw ConfigError("train_rf: cfg.kind is not rf");
    if (cfg.tree_count == 0) throw ConfigError("train_rf: tree count must be positive");
    check_dataset(data, "train_rf");
    if (std::set<int>(data.labels.begin(), data.labels.end()).size() < 2) {
        throw DataError("train_rf: need >= 2 classes");
    }

    const std::size_t n = data.size();
    const std::size_t m = data.m_star;
    const std::size_t mtry = cfg.features_per_split > 0
                                 ? cfg.features_per_split
                                 : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                                std::sqrt(static_cast<double>(m))));

    ClassifierModel model;
    model.kind = ClassifierKind::rf;
    model.input_width = m;
    model.label_names = data.label_names;
    model.trees.reserve(cfg.tree_count);

    for (std::size_t t = 0; t < cfg.tree_count; ++t) {
        Rng rng(derive_seed(cfg.seed, t));
        std::vector<std::size_t> bag(n);
        for (std::size_t i = 0; i < n; ++i) bag[i] = rng.next_below(n);

        TreeBuilder builder{data.features, data.labels, data.num_classes(),
                            mtry,          cfg.max_depth, rng,
                            Tree{}};
        builder.build(bag, 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

} // namespace histofeat

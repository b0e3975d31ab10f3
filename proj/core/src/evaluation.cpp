#include "histofeat/evaluation.hpp"

#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace histofeat {

namespace {

void shuffle_in_place(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng.next_below(i);
        std::swap(v[i - 1], v[j]);
    }
}

std::vector<std::vector<std::size_t>> deal_groups(std::vector<std::vector<std::size_t>> groups,
                                                  std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    // One cursor across all groups keeps overall fold sizes within one of
    // each other while each group stays balanced to within one as well.
    std::size_t cursor = 0;
    for (auto& group : groups) {
        shuffle_in_place(group, rng);
        for (std::size_t idx : group) {
            folds[cursor % k].push_back(idx);
            ++cursor;
        }
    }
    return folds;
}

} // namespace

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed) {
    if (k < 2) throw ConfigError("kfold_indices: k must be at least 2");
    if (k > n) throw ConfigError("kfold_indices: k=" + std::to_string(k) + " exceeds n=" +
                               std::to_string(n));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return deal_groups({std::move(all)}, k, seed);
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed,
                                                    const std::vector<int>& labels) {
    if (labels.size() != n) {
        throw DataError("kfold_indices: " + std::to_string(labels.size()) + " labels for n=" +
                        std::to_string(n));
    }
    if (k < 2) throw ConfigError("kfold_indices: k must be at least 2");
    if (k > n) throw ConfigError("kfold_indices: k=" + std::to_string(k) + " exceeds n=" +
                               std::to_string(n));
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < n; ++i) by_label[labels[i]].push_back(i);
    std::vector<std::vector<std::size_t>> groups;
    groups.reserve(by_label.size());
    for (auto& [label, group] : by_label) groups.push_back(std::move(group));
    return deal_groups(std::move(groups), k, seed);
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (std::size_t c : counts) t += c;
    return t;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 std::size_t classes) {
    if (y_true.size() != y_pred.size()) {
        throw DataError("confusion_matrix: " + std::to_string(y_true.size()) + " true vs " +
                        std::to_string(y_pred.size()) + " predicted labels");
    }
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(classes * classes, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        int t = y_true[i];
        int p = y_pred[i];
        if (t < 0 || static_cast<std::size_t>(t) >= classes || p < 0 ||
            static_cast<std::size_t>(p) >= classes) {
            throw DataError("confusion_matrix: label outside [0, " + std::to_string(classes) +
                            ") at position " + std::to_string(i));
        }
        ++cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

ClassRates rates_from_confusion(const ConfusionMatrix& cm) {
    const std::size_t s = cm.classes;
    const std::size_t total = cm.total();
    ClassRates rates;
    rates.tpr.assign(s, 0.0);
    rates.fpr.assign(s, 0.0);
    rates.tpr_defined.assign(s, true);

    double tpr_sum = 0.0, fpr_sum = 0.0;
    std::size_t tpr_n = 0;
    for (std::size_t i = 0; i < s; ++i) {
        std::size_t row = 0, col = 0;
        for (std::size_t j = 0; j < s; ++j) {
            row += cm.at(i, j);
            col += cm.at(j, i);
        }
        if (row > 0) {
            rates.tpr[i] = static_cast<double>(cm.at(i, i)) / static_cast<double>(row);
            tpr_sum += rates.tpr[i];
            ++tpr_n;
        } else {
            rates.tpr_defined[i] = false;
        }
        std::size_t negatives = total - row;
        if (negatives > 0) {
            rates.fpr[i] = static_cast<double>(col - cm.at(i, i)) / static_cast<double>(negatives);
        }
        fpr_sum += rates.fpr[i];
    }
    rates.macro_tpr = tpr_n > 0 ? tpr_sum / static_cast<double>(tpr_n) : 0.0;
    rates.macro_fpr = s > 0 ? fpr_sum / static_cast<double>(s) : 0.0;
    return rates;
}

double cv_sd(std::span<const double> fold_accs, std::size_t k) {
    if (k < 2) throw ConfigError("cv_sd: k must be at least 2");
    if (fold_accs.size() != k) {
        throw DataError("cv_sd: " + std::to_string(fold_accs.size()) + " accuracies for k=" +
                        std::to_string(k));
    }
    double mean = 0.0;
    for (double a : fold_accs) mean += a;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double a : fold_accs) {
        double d = a - mean;
        ss += d * d;
    }
    // sd/sqrt(k) computed as sqrt(variance/k): one rounding step fewer.
    double variance = ss / static_cast<double>(k - 1);
    return std::sqrt(variance / static_cast<double>(k));
}

EvalReport cross_validate(const LabeledDataset& data, const ClassifierConfig& cfg, std::size_t k,
                          std::uint64_t seed, const FoldObserver& observer) {
    check_dataset(data, "cross_validate");
    auto folds = kfold_indices(data.size(), k, seed, data.labels);

    std::vector<int> pooled_true, pooled_pred;
    pooled_true.reserve(data.size());
    pooled_pred.reserve(data.size());
    std::vector<double> fold_accs;
    fold_accs.reserve(k);

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::vector<std::size_t>& test_idx = folds[f];
        std::vector<std::size_t> train_idx;
        train_idx.reserve(data.size() - test_idx.size());
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
        }

        LabeledDataset train;
        train.m_star = data.m_star;
        train.label_names = data.label_names;
        train.features.reserve(train_idx.size());
        train.labels.reserve(train_idx.size());
        for (std::size_t r : train_idx) {
            train.features.push_back(data.features[r]);
            train.labels.push_back(data.labels[r]);
        }

        ClassifierConfig fold_cfg = cfg;
        fold_cfg.seed = derive_seed(seed, f + 1);
        ClassifierModel model = train_classifier(train, fold_cfg);

        std::vector<std::vector<double>> test_rows;
        test_rows.reserve(test_idx.size());
        for (std::size_t r : test_idx) test_rows.push_back(data.features[r]);
        Prediction pred = predict(model, test_rows);

        std::size_t correct = 0;
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            pooled_true.push_back(data.labels[test_idx[i]]);
            pooled_pred.push_back(pred.labels[i]);
            if (pred.labels[i] == data.labels[test_idx[i]]) ++correct;
        }
        fold_accs.push_back(100.0 * static_cast<double>(correct) /
                            static_cast<double>(test_idx.size()));

        if (observer) {
            observer(FoldView{f, std::span<const std::size_t>(train_idx),
                              std::span<const std::size_t>(test_idx), model, pred});
        }
    }

    ConfusionMatrix cm = confusion_matrix(pooled_true, pooled_pred, data.num_classes());
    ClassRates rates = rates_from_confusion(cm);

    EvalReport report;
    report.per_class_tpr = rates.tpr;
    report.per_class_fpr = rates.fpr;
    report.fold_accuracies = fold_accs;
    double mean = 0.0;
    for (double a : fold_accs) mean += a;
    report.acc_mean = mean / static_cast<double>(fold_accs.size());
    report.acc_sd = cv_sd(fold_accs, k);
    report.classifier = classifier_kind_name(cfg.kind);
    report.k = static_cast<int>(k);
    report.seed = seed;
    return report;
}

namespace {

// Dominant eigenvector of `cov` by power iteration, kept orthogonal to
// `against` when given. Returns a unit vector; the zero matrix yields a
// deterministic unit vector orthogonal to `against`.
std::vector<double> power_iterate(const std::vector<double>& cov, std::size_t m,
                                  const std::vector<double>* against) {
    Rng rng(0x9e3779b97f4a7c15ull);
    std::vector<double> v(m);
    for (double& c : v) c = rng.next_gaussian();

    auto orthogonalize = [&](std::vector<double>& u) {
        if (!against) return;
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += u[i] * (*against)[i];
        for (std::size_t i = 0; i < m; ++i) u[i] -= dot * (*against)[i];
    };
    auto norm_of = [&](const std::vector<double>& u) {
        double ss = 0.0;
        for (double c : u) ss += c * c;
        return std::sqrt(ss);
    };

    orthogonalize(v);
    double nv = norm_of(v);
    if (nv == 0.0) {
        // Start vector collapsed; fall back to the cleanest basis direction.
        std::size_t pick = 0;
        if (against) {
            for (std::size_t i = 1; i < m; ++i) {
                if (std::fabs((*against)[i]) < std::fabs((*against)[pick])) pick = i;
            }
        }
        v.assign(m, 0.0);
        v[pick] = 1.0;
        orthogonalize(v);
        nv = norm_of(v);
    }
    for (double& c : v) c /= nv;

    // Anything at rounding scale relative to the matrix entries is treated as
    // zero; normalizing such residue yields a direction made of cancellation
    // noise (often collapsing back onto `against`).
    double scale = 0.0;
    for (double c : cov) scale = std::max(scale, std::fabs(c));
    const double tiny = std::max(scale * 1e-13, 1e-300);

    std::vector<double> next(m);
    for (int iter = 0; iter < 10000; ++iter) {
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc += cov[i * m + j] * v[j];
            next[i] = acc;
        }
        orthogonalize(next);
        double nn = norm_of(next);
        if (nn <= tiny) break; // deflated matrix is numerically zero; keep v
        for (std::size_t i = 0; i < m; ++i) next[i] /= nn;
        // A second orthogonalization pass removes drift toward `against`
        // accumulated by the normalization above.
        orthogonalize(next);
        double n2 = norm_of(next);
        if (n2 < 0.5) break; // iterate collapsed onto `against`; keep v
        double diff = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            next[i] /= n2;
            diff = std::max(diff, std::fabs(next[i] - v[i]));
        }
        std::swap(v, next);
        if (diff < 1e-14) break;
    }
    return v;
}

void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
    }
    if (v[arg] < 0.0) {
        for (double& c : v) c = -c;
    }
}

} // namespace

Projection2D pca_project_2d(const LabeledDataset& data) {
    check_dataset(data, "pca_project_2d");
    const std::size_t n = data.size();
    const std::size_t m = data.m_star;
    if (n < 3) throw DataError("pca_project_2d: need at least 3 rows");
    if (m < 2) throw DataError("pca_project_2d: need at least 2 feature columns");

    std::vector<double> mean(m, 0.0);
    for (const auto& row : data.features) {
        for (std::size_t j = 0; j < m; ++j) mean[j] += row[j];
    }
    for (double& c : mean) c /= static_cast<double>(n);

    std::vector<std::vector<double>> centered(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) centered[i][j] = data.features[i][j] - mean[j];
    }

    std::vector<double> cov(m * m, 0.0);
    for (const auto& row : centered) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) cov[i * m + j] += row[i] * row[j];
        }
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            cov[i * m + j] /= static_cast<double>(n - 1);
            cov[j * m + i] = cov[i * m + j];
        }
        trace += cov[i * m + i];
    }
    if (!(trace > 0.0)) throw DataError("pca_project_2d: zero-variance data");

    std::vector<double> v1 = power_iterate(cov, m, nullptr);

    double lambda1 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += cov[i * m + j] * v1[j];
        lambda1 += v1[i] * acc;
    }
    std::vector<double> deflated = cov;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) deflated[i * m + j] -= lambda1 * v1[i] * v1[j];
    }
    std::vector<double> v2 = power_iterate(deflated, m, &v1);

    fix_sign(v1);
    fix_sign(v2);

    Projection2D proj;
    proj.x.resize(n);
    proj.y.resize(n);
    proj.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double px = 0.0, py = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            px += centered[i][j] * v1[j];
            py += centered[i][j] * v2[j];
        }
        proj.x[i] = px;
        proj.y[i] = py;
        proj.labels.push_back(data.label_names[static_cast<std::size_t>(data.labels[i])]);
    }

    // First axis must carry at least as much variance as the second.
    auto variance_of = [n](const std::vector<double>& c) {
        double mu = 0.0;
        for (double v : c) mu += v;
        mu /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : c) ss += (v - mu) * (v - mu);
        return ss / static_cast<double>(n - 1);
    };
    if (variance_of(proj.y) > variance_of(proj.x)) {
        std::swap(proj.x, proj.y);
    }
    return proj;
}

} // namespace histofeat

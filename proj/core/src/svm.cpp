#include "histofeat/classifier.hpp"

#include "histofeat/errors.hpp"

#include <cmath>
#include <set>

namespace histofeat {

ClassifierModel train_svm(const LabeledDataset& data, const ClassifierConfig& cfg) {
    if (cfg.kind != ClassifierKind::svm) throw ConfigError("train_svm: cfg.kind is not svm");
    if (!(cfg.svm_c > 0.0)) throw ConfigError("train_svm: C must be positive");
    if (cfg.svm_epochs == 0) throw ConfigError("train_svm: epochs must be positive");
    check_dataset(data, "train_svm");
    if (std::set<int>(data.labels.begin(), data.labels.end()).size() < 2) {
        throw DataError("train_svm: need >= 2 classes");
    }

    const std::size_t n = data.size();
    const std::size_t m = data.m_star;
    const std::size_t s = data.num_classes();

    Standardizer st = Standardizer::fit(data.features);
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (const auto& row : data.features) rows.push_back(st.apply(row));

    SvmParams params;
    params.weights.assign(s, std::vector<double>(m, 0.0));
    params.bias.assign(s, 0.0);

    const double lambda = 1.0 / (cfg.svm_c * static_cast<double>(n));
    const double eta0 = 1.0;
    const double decay = 0.1;

    std::vector<double> grad_w(m);
    for (std::size_t c = 0; c < s; ++c) {
        std::vector<double>& w = params.weights[c];
        double& b = params.bias[c];
        for (std::size_t epoch = 0; epoch < cfg.svm_epochs; ++epoch) {
            double eta = eta0 / (1.0 + decay * static_cast<double>(epoch));
            for (std::size_t k = 0; k < m; ++k) grad_w[k] = lambda * w[k];
            double grad_b = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double y = data.labels[r] == static_cast<int>(c) ? 1.0 : -1.0;
                double margin = b;
                for (std::size_t k = 0; k < m; ++k) margin += w[k] * rows[r][k];
                if (y * margin < 1.0) {
                    double scale = y / static_cast<double>(n);
                    for (std::size_t k = 0; k < m; ++k) grad_w[k] -= scale * rows[r][k];
                    grad_b -= scale;
                }
            }
            for (std::size_t k = 0; k < m; ++k) w[k] -= eta * grad_w[k];
            b -= eta * grad_b;
        }
    }

    ClassifierModel model;
    model.kind = ClassifierKind::svm;
    model.input_width = m;
    model.label_names = data.label_names;
    model.standardizer = std::move(st);
    model.svm = std::move(params);
    return model;
}

} // namespace histofeat

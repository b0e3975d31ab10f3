#include "histofeat/classifier.hpp"

#include "histofeat/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace histofeat {

namespace {

void check_row_width(const std::vector<std::vector<double>>& rows, std::size_t want,
                     const char* who) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != want) {
            throw DataError(std::string(who) + ": row " + std::to_string(r) + " has " +
                            std::to_string(rows[r].size()) + " features, model expects " +
                            std::to_string(want));
        }
    }
}

int tree_route(const Tree& tree, const std::vector<double>& row) {
    int i = 0;
    while (tree.nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(i)];
        i = row[static_cast<std::size_t>(node.feature)] <= node.split_value ? node.left : node.right;
    }
    return tree.nodes[static_cast<std::size_t>(i)].label;
}

int argmax_index(const std::vector<double>& v) {
    int best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

} // namespace

std::string classifier_kind_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::nn: return "nn";
        case ClassifierKind::rf: return "rf";
        case ClassifierKind::svm: return "svm";
    }
    return "nn";
}

ClassifierKind classifier_kind_from_name(const std::string& name) {
    if (name == "nn") return ClassifierKind::nn;
    if (name == "rf") return ClassifierKind::rf;
    if (name == "svm") return ClassifierKind::svm;
    throw ConfigError("unknown classifier '" + name + "' (expected nn, rf, or svm)");
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DataError("Standardizer::fit: no rows");
    const std::size_t cols = rows[0].size();
    Standardizer s;
    s.mean.assign(cols, 0.0);
    s.stddev.assign(cols, 0.0);
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < cols; ++k) s.mean[k] += row[k];
    }
    for (std::size_t k = 0; k < cols; ++k) s.mean[k] /= static_cast<double>(rows.size());
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < cols; ++k) {
            double d = row[k] - s.mean[k];
            s.stddev[k] += d * d;
        }
    }
    for (std::size_t k = 0; k < cols; ++k) {
        s.stddev[k] = std::sqrt(s.stddev[k] / static_cast<double>(rows.size()));
    }
    return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
        double scale = stddev[k] > 0.0 ? stddev[k] : 1.0;
        out[k] = (row[k] - mean[k]) / scale;
    }
    return out;
}

ClassifierModel train_classifier(const LabeledDataset& data, const ClassifierConfig& cfg) {
    switch (cfg.kind) {
        case ClassifierKind::nn: return train_nn(data, cfg);
        case ClassifierKind::rf: return train_rf(data, cfg);
        case ClassifierKind::svm: return train_svm(data, cfg);
    }
    throw ConfigError("train_classifier: unknown classifier kind");
}

namespace detail {
std::vector<double> nn_scores_row(const NnParams& net, const std::vector<double>& x);
}

Prediction predict(const ClassifierModel& model, const std::vector<std::vector<double>>& rows) {
    check_row_width(rows, model.input_width, "predict");
    Prediction out;
    out.labels.reserve(rows.size());
    out.scores.reserve(rows.size());

    for (const auto& raw_row : rows) {
        std::vector<double> scores;
        switch (model.kind) {
            case ClassifierKind::nn:
                scores = detail::nn_scores_row(model.nn, model.standardizer.apply(raw_row));
                break;
            case ClassifierKind::rf: {
                scores.assign(model.label_names.size(), 0.0);
                for (const Tree& tree : model.trees) {
                    scores[static_cast<std::size_t>(tree_route(tree, raw_row))] += 1.0;
                }
                for (double& s : scores) s /= static_cast<double>(model.trees.size());
                break;
            }
            case ClassifierKind::svm: {
                std::vector<double> x = model.standardizer.apply(raw_row);
                scores.resize(model.svm.weights.size());
                for (std::size_t c = 0; c < model.svm.weights.size(); ++c) {
                    double v = model.svm.bias[c];
                    for (std::size_t k = 0; k < x.size(); ++k) v += model.svm.weights[c][k] * x[k];
                    scores[c] = v;
                }
                break;
            }
        }
        out.labels.push_back(argmax_index(scores));
        out.scores.push_back(std::move(scores));
    }
    return out;
}

void save_model(const ClassifierModel& model, const std::string& path) {
    nlohmann::ordered_json j;
    j["kind"] = classifier_kind_name(model.kind);
    j["input_width"] = model.input_width;
    j["label_names"] = model.label_names;
    if (!model.standardizer.empty()) {
        j["standardizer"] = {{"mean", model.standardizer.mean}, {"stddev", model.standardizer.stddev}};
    }
    switch (model.kind) {
        case ClassifierKind::nn:
            j["nn"] = {{"in", model.nn.in},   {"h1", model.nn.h1}, {"h2", model.nn.h2},
                       {"out", model.nn.out}, {"w1", model.nn.w1}, {"b1", model.nn.b1},
                       {"w2", model.nn.w2},   {"b2", model.nn.b2}, {"w3", model.nn.w3},
                       {"b3", model.nn.b3}};
            break;
        case ClassifierKind::rf: {
            nlohmann::ordered_json trees = nlohmann::ordered_json::array();
            for (const Tree& tree : model.trees) {
                nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
                for (const TreeNode& n : tree.nodes) {
                    nodes.push_back({{"feature", n.feature},
                                     {"split", n.split_value},
                                     {"left", n.left},
                                     {"right", n.right},
                                     {"label", n.label}});
                }
                trees.push_back({{"nodes", std::move(nodes)}});
            }
            j["rf"] = {{"trees", std::move(trees)}};
            break;
        }
        case ClassifierKind::svm:
            j["svm"] = {{"weights", model.svm.weights}, {"bias", model.svm.bias}};
            break;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failure on " + path);
}

ClassifierModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": invalid model JSON: " + e.what());
    }

    ClassifierModel model;
    try {
        model.kind = classifier_kind_from_name(j.at("kind").get<std::string>());
        model.input_width = j.at("input_width").get<std::size_t>();
        model.label_names = j.at("label_names").get<std::vector<std::string>>();
        if (j.contains("standardizer")) {
            model.standardizer.mean = j["standardizer"].at("mean").get<std::vector<double>>();
            model.standardizer.stddev = j["standardizer"].at("stddev").get<std::vector<double>>();
        }
        switch (model.kind) {
            case ClassifierKind::nn: {
                const auto& n = j.at("nn");
                model.nn.in = n.at("in").get<std::size_t>();
                model.nn.h1 = n.at("h1").get<std::size_t>();
                model.nn.h2 = n.at("h2").get<std::size_t>();
                model.nn.out = n.at("out").get<std::size_t>();
                model.nn.w1 = n.at("w1").get<std::vector<double>>();
                model.nn.b1 = n.at("b1").get<std::vector<double>>();
                model.nn.w2 = n.at("w2").get<std::vector<double>>();
                model.nn.b2 = n.at("b2").get<std::vector<double>>();
                model.nn.w3 = n.at("w3").get<std::vector<double>>();
                model.nn.b3 = n.at("b3").get<std::vector<double>>();
                break;
            }
            case ClassifierKind::rf: {
                for (const auto& tj : j.at("rf").at("trees")) {
                    Tree tree;
                    for (const auto& nj : tj.at("nodes")) {
                        TreeNode node;
                        node.feature = nj.at("feature").get<int>();
                        node.split_value = nj.at("split").get<double>();
                        node.left = nj.at("left").get<int>();
                        node.right = nj.at("right").get<int>();
                        node.label = nj.at("label").get<int>();
                        tree.nodes.push_back(node);
                    }
                    model.trees.push_back(std::move(tree));
                }
                break;
            }
            case ClassifierKind::svm:
                model.svm.weights = j.at("svm").at("weights").get<std::vector<std::vector<double>>>();
                model.svm.bias = j.at("svm").at("bias").get<std::vector<double>>();
                break;
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ": model JSON missing or mistyped field: " + e.what());
    }

    // Shape sanity before the model is used for prediction.
    const std::size_t s = model.label_names.size();
    switch (model.kind) {
        case ClassifierKind::nn:
            if (model.nn.out != s || model.nn.in != model.input_width ||
                model.nn.w1.size() != model.nn.h1 * model.nn.in ||
                model.nn.w2.size() != model.nn.h2 * model.nn.h1 ||
                model.nn.w3.size() != model.nn.out * model.nn.h2 ||
                model.nn.b1.size() != model.nn.h1 || model.nn.b2.size() != model.nn.h2 ||
                model.nn.b3.size() != model.nn.out) {
                throw IoError(path + ": network parameter shapes are inconsistent");
            }
            break;
        case ClassifierKind::rf:
            if (model.trees.empty()) throw IoError(path + ": forest has no trees");
            break;
        case ClassifierKind::svm:
            if (model.svm.weights.size() != s || model.svm.bias.size() != s) {
                throw IoError(path + ": per-class weight count does not match label count");
            }
            for (const auto& w : model.svm.weights) {
                if (w.size() != model.input_width) {
                    throw IoError(path + ": weight vector width does not match input width");
                }
            }
            break;
    }
    return model;
}

} // namespace histofeat

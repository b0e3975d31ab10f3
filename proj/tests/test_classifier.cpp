#include <doctest.h>

#include "histofeat/classifier.hpp"
#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"

#include "temp_dir.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

using namespace histofeat;

// Well-separated Gaussian blobs, one per class.
static LabeledDataset make_blobs(std::size_t classes, std::size_t per_class, std::size_t dims,
                                 std::uint64_t seed, double spread = 0.5) {
    LabeledDataset data;
    data.m_star = dims;
    Rng rng(seed);
    for (std::size_t c = 0; c < classes; ++c) {
        data.label_names.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> row(dims);
            for (std::size_t d = 0; d < dims; ++d) {
                double center = (d % classes == c) ? 8.0 : 0.0;
                row[d] = center + spread * rng.next_gaussian();
            }
            data.features.push_back(std::move(row));
            data.labels.push_back(static_cast<int>(c));
        }
    }
    return data;
}

static double train_accuracy(const ClassifierModel& model, const LabeledDataset& data) {
    Prediction p = predict(model, data.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (p.labels[i] == data.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

TEST_CASE("nn fits separable blobs") {
    auto data = make_blobs(2, 40, 4, 1);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::nn;
    cfg.hidden1 = 16;
    cfg.hidden2 = 8;
    cfg.epochs = 60;
    cfg.seed = 3;
    ClassifierModel model = train_classifier(data, cfg);
    CHECK(train_accuracy(model, data) >= 0.99);
    CHECK(model.kind == ClassifierKind::nn);
    CHECK(model.input_width == 4);
    CHECK_FALSE(model.standardizer.empty());
}

TEST_CASE("nn softmax scores sum to one") {
    auto data = make_blobs(3, 20, 5, 2);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::nn;
    cfg.hidden1 = 10;
    cfg.hidden2 = 6;
    cfg.epochs = 20;
    ClassifierModel model = train_classifier(data, cfg);
    Prediction p = predict(model, data.features);
    for (const auto& scores : p.scores) {
        REQUIRE(scores.size() == 3);
        double total = 0.0;
        for (double s : scores) {
            CHECK(s >= 0.0);
            total += s;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("nn training is bit-for-bit deterministic") {
    auto data = make_blobs(2, 15, 3, 5);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::nn;
    cfg.hidden1 = 8;
    cfg.hidden2 = 4;
    cfg.epochs = 15;
    cfg.seed = 11;
    ClassifierModel a = train_classifier(data, cfg);
    ClassifierModel b = train_classifier(data, cfg);
    CHECK(a.nn.w1 == b.nn.w1);
    CHECK(a.nn.b1 == b.nn.b1);
    CHECK(a.nn.w2 == b.nn.w2);
    CHECK(a.nn.w3 == b.nn.w3);
    CHECK(a.nn.b3 == b.nn.b3);
    Prediction pa = predict(a, data.features);
    Prediction pb = predict(b, data.features);
    CHECK(pa.labels == pb.labels);
    CHECK(pa.scores == pb.scores);
}

TEST_CASE("analytic gradients match finite differences on a small net") {
    for (std::uint64_t seed : {7ull, 19ull}) {
        auto sample = make_blobs(2, 4, 3, 100 + seed, 1.0);
        ClassifierConfig cfg;
        cfg.kind = ClassifierKind::nn;
        cfg.hidden1 = 5;
        cfg.hidden2 = 4;
        cfg.seed = seed;
        double err = nn_gradient_check(cfg, sample);
        CHECK(err < 1e-4);
    }
}

TEST_CASE("zero-input zero-weight gradients agree and stay finite") {
    NnParams net;
    net.in = 2;
    net.h1 = 3;
    net.h2 = 2;
    net.out = 2;
    net.w1.assign(net.h1 * net.in, 0.0);
    net.b1.assign(net.h1, 0.0);
    net.w2.assign(net.h2 * net.h1, 0.0);
    net.b2.assign(net.h2, 0.0);
    net.w3.assign(net.out * net.h2, 0.0);
    net.b3.assign(net.out, 0.0);
    std::vector<std::vector<double>> rows{{0.0, 0.0}, {0.0, 0.0}};
    std::vector<int> labels{0, 1};
    double err = nn_gradient_check(net, rows, labels);
    CHECK(std::isfinite(err));
    CHECK(err < 1e-6);
}

TEST_CASE("doubling the finite-difference step raises the error about fourfold") {
    auto sample = make_blobs(2, 4, 3, 77, 1.0);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::nn;
    cfg.hidden1 = 5;
    cfg.hidden2 = 4;
    cfg.seed = 7;
    double e1 = nn_gradient_check(cfg, sample, 1e-3);
    double e2 = nn_gradient_check(cfg, sample, 2e-3);
    CHECK(e2 > e1);
    CHECK(e2 / e1 == doctest::Approx(4.0).epsilon(0.8)); // second-order truncation
}

TEST_CASE("rf fits separable blobs without a standardizer") {
    auto data = make_blobs(3, 30, 4, 21);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::rf;
    cfg.tree_count = 30;
    cfg.seed = 4;
    ClassifierModel model = train_classifier(data, cfg);
    CHECK(train_accuracy(model, data) >= 0.99);
    CHECK(model.standardizer.empty());
    CHECK(model.trees.size() == 30);
}

TEST_CASE("a single stump separates two points") {
    LabeledDataset data;
    data.features = {{0.0}, {1.0}};
    data.labels = {0, 1};
    data.label_names = {"lo", "hi"};
    data.m_star = 1;
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::rf;
    cfg.tree_count = 1;
    cfg.max_depth = 1;
    cfg.seed = 0;
    // A 2-point bootstrap bag can be single-class; find a seed whose bag keeps both.
    for (std::uint64_t s = 0; s < 8; ++s) {
        cfg.seed = s;
        ClassifierModel model = train_classifier(data, cfg);
        if (train_accuracy(model, data) == 1.0) {
            Prediction p = predict(model, {{-0.3}, {1.7}});
            CHECK(p.labels == std::vector<int>{0, 1});
            return;
        }
    }
    FAIL("no seed produced a both-class bootstrap bag");
}

TEST_CASE("rf training is deterministic for a fixed seed") {
    auto data = make_blobs(2, 20, 3, 9);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::rf;
    cfg.tree_count = 12;
    cfg.seed = 33;
    ClassifierModel a = train_classifier(data, cfg);
    ClassifierModel b = train_classifier(data, cfg);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
        for (std::size_t n = 0; n < a.trees[t].nodes.size(); ++n) {
            CHECK(a.trees[t].nodes[n].feature == b.trees[t].nodes[n].feature);
            CHECK(a.trees[t].nodes[n].split_value == b.trees[t].nodes[n].split_value);
            CHECK(a.trees[t].nodes[n].label == b.trees[t].nodes[n].label);
        }
    }
    CHECK(predict(a, data.features).labels == predict(b, data.features).labels);
}

TEST_CASE("rf predictions survive strictly increasing feature transforms") {
    auto data = make_blobs(3, 25, 3, 50, 1.5);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::rf;
    cfg.tree_count = 15;
    cfg.seed = 8;

    auto warp = [](const std::vector<std::vector<double>>& rows) {
        auto out = rows;
        for (auto& row : out) {
            row[0] = std::exp(row[0] * 0.3);           // strictly increasing
            row[1] = row[1] * row[1] * row[1];         // cube keeps order on all reals
            row[2] = 5.0 * row[2] + 1.0;               // affine
        }
        return out;
    };

    LabeledDataset warped = data;
    warped.features = warp(data.features);

    ClassifierModel plain = train_classifier(data, cfg);
    ClassifierModel bent = train_classifier(warped, cfg);

    auto test_rows = make_blobs(3, 10, 3, 51, 1.5);
    Prediction p_plain = predict(plain, test_rows.features);
    Prediction p_bent = predict(bent, warp(test_rows.features));
    CHECK(p_plain.labels == p_bent.labels);
    CHECK(p_plain.scores == p_bent.scores); // identical vote fractions, not just argmax
}

TEST_CASE("rf refuses single-class data") {
    LabeledDataset data;
    data.features = {{1.0}, {2.0}};
    data.labels = {0, 0};
    data.label_names = {"only"};
    data.m_star = 1;
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::rf;
    CHECK_THROWS_WITH_AS((void)train_classifier(data, cfg), doctest::Contains("2 classes"),
                         DataError);
}

TEST_CASE("svm separates a unit margin along one axis") {
    LabeledDataset data;
    data.label_names = {"neg", "pos"};
    data.m_star = 2;
    Rng rng(6);
    for (int i = 0; i < 30; ++i) {
        double side = i % 2 == 0 ? -1.0 : 1.0;
        data.features.push_back({side * (1.0 + rng.next_double()), rng.next_gaussian()});
        data.labels.push_back(side < 0 ? 0 : 1);
    }
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::svm;
    ClassifierModel model = train_classifier(data, cfg);
    CHECK(train_accuracy(model, data) == 1.0);
    CHECK(model.svm.weights.size() == 2);
    CHECK_FALSE(model.standardizer.empty());
}

TEST_CASE("svm one-vs-rest keeps one weight vector per class") {
    auto data = make_blobs(3, 15, 4, 60);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::svm;
    ClassifierModel model = train_classifier(data, cfg);
    REQUIRE(model.svm.weights.size() == 3);
    REQUIRE(model.svm.bias.size() == 3);
    for (const auto& w : model.svm.weights) CHECK(w.size() == 4);
    CHECK(train_accuracy(model, data) >= 0.99);
}

TEST_CASE("svm decision values are affine in the inputs") {
    ClassifierModel model;
    model.kind = ClassifierKind::svm;
    model.input_width = 2;
    model.label_names = {"a", "b"};
    model.standardizer.mean = {0.0, 0.0};
    model.standardizer.stddev = {1.0, 1.0};
    model.svm.weights = {{1.0, 2.0}, {-1.0, 0.5}};
    model.svm.bias = {0.5, -1.0};

    std::vector<double> x{0.7, -1.3};
    const double a = 3.0;
    std::vector<double> ax{a * x[0], a * x[1]};
    Prediction px = predict(model, {x});
    Prediction pax = predict(model, {ax});
    for (std::size_t c = 0; c < 2; ++c) {
        double expected = a * (px.scores[0][c] - model.svm.bias[c]) + model.svm.bias[c];
        CHECK(pax.scores[0][c] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("svm refuses single-class data") {
    LabeledDataset data;
    data.features = {{1.0}, {2.0}};
    data.labels = {0, 0};
    data.label_names = {"only"};
    data.m_star = 1;
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::svm;
    CHECK_THROWS_WITH_AS((void)train_classifier(data, cfg), doctest::Contains("2 classes"),
                         DataError);
}

TEST_CASE("predict handles boundaries and rejects width mismatches") {
    auto data = make_blobs(2, 10, 3, 70);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::svm;
    ClassifierModel model = train_classifier(data, cfg);

    Prediction empty = predict(model, {});
    CHECK(empty.labels.empty());
    CHECK(empty.scores.empty());

    CHECK_THROWS_AS((void)predict(model, {{1.0, 2.0}}), DataError);
}

TEST_CASE("standardizer centers and scales, sparing flat columns") {
    std::vector<std::vector<double>> rows{{1.0, 5.0}, {3.0, 5.0}};
    Standardizer st = Standardizer::fit(rows);
    REQUIRE(st.mean.size() == 2);
    CHECK(st.mean[0] == doctest::Approx(2.0));
    CHECK(st.mean[1] == doctest::Approx(5.0));

    auto z = st.apply({3.0, 5.0});
    CHECK(z[0] == doctest::Approx(1.0)); // (3-2)/1
    CHECK(z[1] == doctest::Approx(0.0)); // flat column: centered only
}

TEST_CASE("models survive a save/load round trip") {
    temp_dir dir("models");
    auto data = make_blobs(3, 12, 4, 80);

    for (auto kind : {ClassifierKind::nn, ClassifierKind::rf, ClassifierKind::svm}) {
        ClassifierConfig cfg;
        cfg.kind = kind;
        cfg.hidden1 = 6;
        cfg.hidden2 = 4;
        cfg.epochs = 10;
        cfg.tree_count = 5;
        cfg.seed = 14;
        ClassifierModel model = train_classifier(data, cfg);
        std::string path = dir.file("model_" + classifier_kind_name(kind) + ".json");
        save_model(model, path);
        ClassifierModel back = load_model(path);

        CHECK(back.kind == model.kind);
        CHECK(back.input_width == model.input_width);
        CHECK(back.label_names == model.label_names);
        Prediction p1 = predict(model, data.features);
        Prediction p2 = predict(back, data.features);
        CHECK(p1.labels == p2.labels);
        REQUIRE(p1.scores.size() == p2.scores.size());
        for (std::size_t i = 0; i < p1.scores.size(); ++i) {
            for (std::size_t c = 0; c < p1.scores[i].size(); ++c) {
                CHECK(p1.scores[i][c] == doctest::Approx(p2.scores[i][c]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("load_model rejects missing files and malformed documents") {
    temp_dir dir("badmodel");
    CHECK_THROWS_AS((void)load_model(dir.file("absent.json")), IoError);

    {
        std::ofstream out(dir.file("junk.json"));
        out << "{ not json";
    }
    CHECK_THROWS_AS((void)load_model(dir.file("junk.json")), IoError);
}

TEST_CASE("classifier kind names round trip") {
    for (auto kind : {ClassifierKind::nn, ClassifierKind::rf, ClassifierKind::svm}) {
        CHECK(classifier_kind_from_name(classifier_kind_name(kind)) == kind);
    }
    CHECK_THROWS_AS((void)classifier_kind_from_name("boost"), ConfigError);
}

TEST_CASE("training rows of a well-fitted model reproduce their labels") {
    auto data = make_blobs(2, 20, 3, 90);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::rf;
    cfg.tree_count = 20;
    cfg.seed = 2;
    ClassifierModel model = train_classifier(data, cfg);
    Prediction p = predict(model, data.features);
    CHECK(p.labels == data.labels);
}

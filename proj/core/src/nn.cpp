#include "histofeat/classifier.hpp"

#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"

#include <array>
#include <cmath>
#include <numeric>

namespace histofeat {

namespace {

struct NnGrads {
    std::vector<double> w1, b1, w2, b2, w3, b3;

    void match(const NnParams& net) {
        w1.assign(net.w1.size(), 0.0);
        b1.assign(net.b1.size(), 0.0);
        w2.assign(net.w2.size(), 0.0);
        b2.assign(net.b2.size(), 0.0);
        w3.assign(net.w3.size(), 0.0);
        b3.assign(net.b3.size(), 0.0);
    }
};

// Mean cross-entropy of the rows listed in `idx`; accumulates parameter
// gradients of that mean into `grads` when given.
double nn_loss_and_grad(const NnParams& net, const std::vector<std::vector<double>>& rows,
                        const std::vector<int>& labels, std::span<const std::size_t> idx,
                        NnGrads* grads) {
    const double inv_batch = 1.0 / static_cast<double>(idx.size());
    double loss = 0.0;

    std::vector<double> a1(net.h1), a2(net.h2), z3(net.out), probs(net.out);
    std::vector<double> gz3(net.out), gz2(net.h2), gz1(net.h1);

    for (std::size_t r : idx) {
        const std::vector<double>& x = rows[r];

        for (std::size_t j = 0; j < net.h1; ++j) {
            double z = net.b1[j];
            const double* w = &net.w1[j * net.in];
            for (std::size_t i = 0; i < net.in; ++i) z += w[i] * x[i];
            a1[j] = z > 0.0 ? z : 0.0;
        }
        for (std::size_t j = 0; j < net.h2; ++j) {
            double z = net.b2[j];
            const double* w = &net.w2[j * net.h1];
            for (std::size_t i = 0; i < net.h1; ++i) z += w[i] * a1[i];
            a2[j] = z > 0.0 ? z : 0.0;
        }
        double zmax = -HUGE_VAL;
        for (std::size_t c = 0; c < net.out; ++c) {
            double z = net.b3[c];
            const double* w = &net.w3[c * net.h2];
            for (std::size_t i = 0; i < net.h2; ++i) z += w[i] * a2[i];
            z3[c] = z;
            zmax = std::max(zmax, z);
        }
        double denom = 0.0;
        for (std::size_t c = 0; c < net.out; ++c) {
            probs[c] = std::exp(z3[c] - zmax);
            denom += probs[c];
        }
        for (std::size_t c = 0; c < net.out; ++c) probs[c] /= denom;

        const std::size_t y = static_cast<std::size_t>(labels[r]);
        loss -= (z3[y] - zmax - std::log(denom)) * inv_batch;

        if (!grads) continue;

        for (std::size_t c = 0; c < net.out; ++c) {
            gz3[c] = (probs[c] - (c == y ? 1.0 : 0.0)) * inv_batch;
        }
        for (std::size_t c = 0; c < net.out; ++c) {
            double* gw = &grads->w3[c * net.h2];
            for (std::size_t i = 0; i < net.h2; ++i) gw[i] += gz3[c] * a2[i];
            grads->b3[c] += gz3[c];
        }
        for (std::size_t j = 0; j < net.h2; ++j) {
            if (a2[j] <= 0.0) {
                gz2[j] = 0.0;
                continue;
            }
            double g = 0.0;
            for (std::size_t c = 0; c < net.out; ++c) g += gz3[c] * net.w3[c * net.h2 + j];
            gz2[j] = g;
        }
        for (std::size_t j = 0; j < net.h2; ++j) {
            double* gw = &grads->w2[j * net.h1];
            for (std::size_t i = 0; i < net.h1; ++i) gw[i] += gz2[j] * a1[i];
            grads->b2[j] += gz2[j];
        }
        for (std::size_t j = 0; j < net.h1; ++j) {
            if (a1[j] <= 0.0) {
                gz1[j] = 0.0;
                continue;
            }
            double g = 0.0;
            for (std::size_t c = 0; c < net.h2; ++c) g += gz2[c] * net.w2[c * net.h1 + j];
            gz1[j] = g;
        }
        for (std::size_t j = 0; j < net.h1; ++j) {
            double* gw = &grads->w1[j * net.in];
            for (std::size_t i = 0; i < net.in; ++i) gw[i] += gz1[j] * x[i];
            grads->b1[j] += gz1[j];
        }
    }
    return loss;
}

NnParams init_network(std::size_t in, std::size_t h1, std::size_t h2, std::size_t out, Rng& rng) {
    NnParams net;
    net.in = in;
    net.h1 = h1;
    net.h2 = h2;
    net.out = out;
    net.w1.resize(h1 * in);
    net.w2.resize(h2 * h1);
    net.w3.resize(out * h2);
    net.b1.assign(h1, 0.0);
    net.b2.assign(h2, 0.0);
    net.b3.assign(out, 0.0);
    auto fill = [&rng](std::vector<double>& w, std::size_t fan_in) {
        double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        for (double& v : w) v = rng.next_gaussian() * scale;
    };
    fill(net.w1, in);
    fill(net.w2, h1);
    fill(net.w3, h2);
    return net;
}

std::array<std::vector<double> NnParams::*, 6> param_members() {
    return {&NnParams::w1, &NnParams::b1, &NnParams::w2,
            &NnParams::b2, &NnParams::w3, &NnParams::b3};
}

std::array<std::vector<double> NnGrads::*, 6> grad_members() {
    return {&NnGrads::w1, &NnGrads::b1, &NnGrads::w2, &NnGrads::b2, &NnGrads::w3, &NnGrads::b3};
}

std::vector<std::vector<double>> standardize_rows(const Standardizer& st,
                                                  const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(st.apply(row));
    return out;
}

} // namespace

namespace detail {

std::vector<double> nn_scores_row(const NnParams& net, const std::vector<double>& x) {
    std::vector<double> a1(net.h1), a2(net.h2), probs(net.out);
    for (std::size_t j = 0; j < net.h1; ++j) {
        double z = net.b1[j];
        const double* w = &net.w1[j * net.in];
        for (std::size_t i = 0; i < net.in; ++i) z += w[i] * x[i];
        a1[j] = z > 0.0 ? z : 0.0;
    }
    for (std::size_t j = 0; j < net.h2; ++j) {
        double z = net.b2[j];
        const double* w = &net.w2[j * net.h1];
        for (std::size_t i = 0; i < net.h1; ++i) z += w[i] * a1[i];
        a2[j] = z > 0.0 ? z : 0.0;
    }
    double zmax = -HUGE_VAL;
    for (std::size_t c = 0; c < net.out; ++c) {
        double z = net.b3[c];
        const double* w = &net.w3[c * net.h2];
        for (std::size_t i = 0; i < net.h2; ++i) z += w[i] * a2[i];
        probs[c] = z;
        zmax = std::max(zmax, z);
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < net.out; ++c) {
        probs[c] = std::exp(probs[c] - zmax);
        denom += probs[c];
    }
    for (std::size_t c = 0; c < net.out; ++c) probs[c] /= denom;
    return probs;
}

} // namespace detail

ClassifierModel train_nn(const LabeledDataset& data, const ClassifierConfig& cfg) {
    if (cfg.kind != ClassifierKind::nn) throw ConfigError("train_nn: cfg.kind is not nn");
    if (cfg.hidden1 == 0 || cfg.hidden2 == 0) throw ConfigError("train_nn: hidden sizes must be positive");
    if (cfg.epochs == 0) throw ConfigError("train_nn: epochs must be positive");
    if (cfg.batch_size == 0) throw ConfigError("train_nn: batch size must be positive");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("train_nn: learning rate must be positive");
    check_dataset(data, "train_nn");

    const std::size_t n = data.size();
    const std::size_t s = data.num_classes();

    Standardizer st = Standardizer::fit(data.features);
    std::vector<std::vector<double>> rows = standardize_rows(st, data.features);

    Rng rng(cfg.seed);
    NnParams net = init_network(data.m_star, cfg.hidden1, cfg.hidden2, s, rng);

    NnGrads grads, adam_m, adam_v;
    adam_m.match(net);
    adam_v.match(net);

    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    double beta1_t = 1.0, beta2_t = 1.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = n - 1; i > 0; --i) {
            std::size_t j = rng.next_below(i + 1);
            std::swap(order[i], order[j]);
        }
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            std::size_t len = std::min(cfg.batch_size, n - start);
            std::span<const std::size_t> batch(order.data() + start, len);

            grads.match(net);
            double loss = nn_loss_and_grad(net, rows, data.labels, batch, &grads);
            if (!std::isfinite(loss)) {
                throw DataError("train_nn: non-finite loss at epoch " + std::to_string(epoch));
            }

            beta1_t *= beta1;
            beta2_t *= beta2;
            auto pm = param_members();
            auto gm = grad_members();
            for (std::size_t p = 0; p < pm.size(); ++p) {
                std::vector<double>& theta = net.*pm[p];
                std::vector<double>& g = grads.*gm[p];
                std::vector<double>& m = adam_m.*gm[p];
                std::vector<double>& v = adam_v.*gm[p];
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
                    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
                    double mhat = m[i] / (1.0 - beta1_t);
                    double vhat = v[i] / (1.0 - beta2_t);
                    theta[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + eps);
                }
            }
        }
    }

    ClassifierModel model;
    model.kind = ClassifierKind::nn;
    model.input_width = data.m_star;
    model.label_names = data.label_names;
    model.standardizer = std::move(st);
    model.nn = std::move(net);
    return model;
}

double nn_gradient_check(const NnParams& net0, const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& labels, double fd_step) {
    if (rows.empty()) throw DataError("nn_gradient_check: no rows");
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});

    NnParams net = net0;
    NnGrads analytic;
    analytic.match(net);
    nn_loss_and_grad(net, rows, labels, idx, &analytic);

    double max_rel = 0.0;
    auto pm = param_members();
    auto gm = grad_members();
    for (std::size_t p = 0; p < pm.size(); ++p) {
        std::vector<double>& theta = net.*pm[p];
        const std::vector<double>& ga = analytic.*gm[p];
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double orig = theta[i];
            theta[i] = orig + fd_step;
            double lp = nn_loss_and_grad(net, rows, labels, idx, nullptr);
            theta[i] = orig - fd_step;
            double lm = nn_loss_and_grad(net, rows, labels, idx, nullptr);
            theta[i] = orig;
            double gf = (lp - lm) / (2.0 * fd_step);
            // The floor keeps finite-difference round-off on near-zero
            // gradients from registering as a large relative error.
            double denom = std::max({std::fabs(ga[i]), std::fabs(gf), 1e-3});
            max_rel = std::max(max_rel, std::fabs(ga[i] - gf) / denom);
        }
    }
    return max_rel;
}

double nn_gradient_check(const ClassifierConfig& cfg, const LabeledDataset& sample, double fd_step) {
    check_dataset(sample, "nn_gradient_check");
    Standardizer st = Standardizer::fit(sample.features);
    std::vector<std::vector<double>> rows = standardize_rows(st, sample.features);
    Rng rng(cfg.seed);
    NnParams net = init_network(sample.m_star, cfg.hidden1, cfg.hidden2, sample.num_classes(), rng);
    return nn_gradient_check(net, rows, sample.labels, fd_step);
}

} // namespace histofeat
